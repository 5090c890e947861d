#pragma once

#include <cmath>
#include <cstdint>

namespace wz {

// Counter-based gaussian generator: every cell value is a pure function of
// (seed, stream, time index, cell index), so coupled resolutions and
// threaded sampling reproduce bit-for-bit in any evaluation order.

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t zigzag64(long long v) {
    return (uint64_t(v) << 1) ^ uint64_t(v >> 63);
}

inline uint64_t counter_hash(uint64_t seed, uint64_t stream, long long jt, uint64_t cell,
                             uint64_t lane) {
    uint64_t h = splitmix64(seed ^ 0x243f6a8885a308d3ULL);
    h = splitmix64(h ^ stream);
    h = splitmix64(h ^ zigzag64(jt));
    h = splitmix64(h ^ cell);
    h = splitmix64(h ^ lane);
    return h;
}

/// uniform in (0,1)
inline double u01(uint64_t h) { return (double(h >> 11) + 0.5) * 0x1.0p-53; }

/// standard gaussian keyed by the counter tuple (Box-Muller)
inline double gaussian_at(uint64_t seed, uint64_t stream, long long jt, uint64_t cell) {
    double u1 = u01(counter_hash(seed, stream, jt, cell, 0));
    double u2 = u01(counter_hash(seed, stream, jt, cell, 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace wz
