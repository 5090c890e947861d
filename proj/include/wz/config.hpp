#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace wz {

/// Plain-text key=value configuration with CLI override. Every run embeds
/// the resolved map in its report, so outputs replay from the report alone.
struct KeyValueConfig {
    std::map<std::string, std::string> kv;

    static KeyValueConfig from_file(const std::string& path,
                                    const std::vector<std::string>& known_keys);
    void set(const std::string& k, const std::string& v) { kv[k] = v; }
    bool has(const std::string& k) const { return kv.count(k) != 0; }

    std::string get(const std::string& k, const std::string& dflt) const;
    double get_double(const std::string& k, double dflt) const;
    long long get_int(const std::string& k, long long dflt) const;
    bool get_bool(const std::string& k, bool dflt) const;

    nlohmann::ordered_json echo() const;
};

/// the documented solver/experiment keys
const std::vector<std::string>& documented_keys();

}  // namespace wz
