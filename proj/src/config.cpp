#include "wz/config.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace wz {

const std::vector<std::string>& documented_keys() {
    static const std::vector<std::string> keys = {
        "d",      "n",     "dt",    "t_final", "epsilon", "theta",
        "c0",     "renorm", "seed",  "ic",      "cap",     "out",
        "jobs",   "ladder", "t_samples", "alpha", "delta0", "support_radius",
        "r",      "n_images", "n_dyadic", "n_mc", "allow_unstable", "theta_rule",
    };
    return keys;
}

KeyValueConfig KeyValueConfig::from_file(const std::string& path,
                                         const std::vector<std::string>& known_keys) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config: cannot open " + path);
    KeyValueConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto notspace = [](unsigned char c) { return !std::isspace(c); };
        line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
        line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(), line.end());
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not key=value");
        std::string k = line.substr(0, eq), v = line.substr(eq + 1);
        k.erase(std::find_if(k.rbegin(), k.rend(), notspace).base(), k.end());
        v.erase(v.begin(), std::find_if(v.begin(), v.end(), notspace));
        if (std::find(known_keys.begin(), known_keys.end(), k) == known_keys.end())
            throw std::invalid_argument("config: unknown key '" + k + "'");
        cfg.kv[k] = v;
    }
    return cfg;
}

std::string KeyValueConfig::get(const std::string& k, const std::string& dflt) const {
    auto it = kv.find(k);
    return it == kv.end() ? dflt : it->second;
}

double KeyValueConfig::get_double(const std::string& k, double dflt) const {
    auto it = kv.find(k);
    if (it == kv.end()) return dflt;
    try {
        size_t pos;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (...) {
        throw std::invalid_argument("config: key '" + k + "' is not a number: " +
                                    it->second);
    }
}

long long KeyValueConfig::get_int(const std::string& k, long long dflt) const {
    auto it = kv.find(k);
    if (it == kv.end()) return dflt;
    try {
        size_t pos;
        long long v = std::stoll(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (...) {
        throw std::invalid_argument("config: key '" + k + "' is not an integer: " +
                                    it->second);
    }
}

bool KeyValueConfig::get_bool(const std::string& k, bool dflt) const {
    auto it = kv.find(k);
    if (it == kv.end()) return dflt;
    const std::string& v = it->second;
    if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "off" || v == "no") return false;
    throw std::invalid_argument("config: key '" + k + "' is not a boolean: " + v);
}

nlohmann::ordered_json KeyValueConfig::echo() const {
    nlohmann::ordered_json j;
    for (const auto& [k, v] : kv) j[k] = v;
    return j;
}

}  // namespace wz
