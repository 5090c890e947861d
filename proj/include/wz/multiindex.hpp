#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace wz {

// Space-time multi-index over (t, x1, .., xd), d <= 3. Slot 0 is time and
// carries parabolic weight 2; unused spatial slots stay zero.
struct MIdx {
    std::array<int, 4> k{0, 0, 0, 0};

    int operator[](int i) const { return k[i]; }
    int& operator[](int i) { return k[i]; }

    bool is_zero() const { return k[0] == 0 && k[1] == 0 && k[2] == 0 && k[3] == 0; }

    /// parabolic degree |k|_s = 2 k0 + k1 + k2 + k3
    int sdeg() const { return 2 * k[0] + k[1] + k[2] + k[3]; }
    /// plain order k0 + k1 + k2 + k3 (sign of (-X)^k uses this)
    int order() const { return k[0] + k[1] + k[2] + k[3]; }

    long long factorial() const {
        auto f = [](int n) { long long r = 1; for (int i = 2; i <= n; ++i) r *= i; return r; };
        return f(k[0]) * f(k[1]) * f(k[2]) * f(k[3]);
    }

    friend MIdx operator+(const MIdx& a, const MIdx& b) {
        MIdx r;
        for (int i = 0; i < 4; ++i) r.k[i] = a.k[i] + b.k[i];
        return r;
    }
    friend bool operator==(const MIdx& a, const MIdx& b) { return a.k == b.k; }
    friend bool operator!=(const MIdx& a, const MIdx& b) { return a.k != b.k; }
    friend bool operator<(const MIdx& a, const MIdx& b) { return a.k < b.k; }

    static MIdx unit(int i) {
        MIdx r;
        r.k[i] = 1;
        return r;
    }
};

/// All multi-indices over (t, x1..xd) with parabolic degree <= cap.
inline std::vector<MIdx> enumerate_midx(int cap, int d) {
    std::vector<MIdx> out;
    for (int k0 = 0; 2 * k0 <= cap; ++k0)
        for (int k1 = 0; 2 * k0 + k1 <= cap && (d >= 1 || k1 == 0); ++k1)
            for (int k2 = 0; 2 * k0 + k1 + k2 <= cap && (d >= 2 || k2 == 0); ++k2)
                for (int k3 = 0; 2 * k0 + k1 + k2 + k3 <= cap && (d >= 3 || k3 == 0); ++k3) {
                    MIdx m;
                    m.k = {k0, k1, k2, k3};
                    out.push_back(m);
                }
    return out;
}

}  // namespace wz
