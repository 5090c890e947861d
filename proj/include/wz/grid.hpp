#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wz/fft.hpp"

namespace wz {

/// Periodic space-time lattice on the unit torus: n points per spatial
/// dimension (power of two), time step dt. Time indices are absolute
/// integers so windows at different offsets address the same noise cells.
struct Lattice {
    int d = 1;
    int n = 64;
    double dt = 1.0 / 256.0;

    double dx() const { return 1.0 / n; }
    size_t ncells() const {
        size_t c = 1;
        for (int i = 0; i < d; ++i) c *= size_t(n);
        return c;
    }
    double cell_volume() const {
        double v = dt;
        for (int i = 0; i < d; ++i) v *= dx();
        return v;
    }
    void validate() const;

    bool operator==(const Lattice& o) const {
        return d == o.d && n == o.n && dt == o.dt;
    }
};

/// Real values on [j0*dt, (j0+nt)*dt) x T^d, row-major time-major.
struct GridField {
    Lattice lat;
    long long j0 = 0;
    int nt = 0;
    std::vector<double> v;

    GridField() = default;
    GridField(const Lattice& l, long long j0_, int nt_)
        : lat(l), j0(j0_), nt(nt_), v(size_t(nt_) * l.ncells(), 0.0) {}

    double t(int j) const { return double(j0 + j) * lat.dt; }
    double* slice(int j) { return v.data() + size_t(j) * lat.ncells(); }
    const double* slice(int j) const { return v.data() + size_t(j) * lat.ncells(); }
    /// slice by absolute time index
    const double* slice_abs(long long ja) const { return slice(int(ja - j0)); }
    bool has_abs(long long ja) const { return ja >= j0 && ja < j0 + nt; }

    double& at(int j, size_t cell) { return v[size_t(j) * lat.ncells() + cell]; }
    double at(int j, size_t cell) const { return v[size_t(j) * lat.ncells() + cell]; }

    double max_abs() const;
    /// L2 norm of one slice: sqrt(sum x^2 dx^d)
    double slice_l2(int j) const;
    double slice_mean(int j) const;
};

/// index helpers for the spatial cube
inline size_t spatial_index(const Lattice& lat, const int* ix) {
    size_t idx = 0;
    for (int i = 0; i < lat.d; ++i) idx = idx * size_t(lat.n) + size_t(ix[i]);
    return idx;
}
void spatial_coords(const Lattice& lat, size_t idx, int* ix);
/// representative coordinate in [-1/2, 1/2)
double torus_coord(const Lattice& lat, int ix);
/// squared euclidean torus distance of cell idx from the origin
double torus_r2(const Lattice& lat, size_t idx);
/// parabolic norm |t|^{1/2} + sum |x_i| with torus representatives
double parabolic_norm(const Lattice& lat, double t, size_t idx);

/// flat binary field format (versioned little-endian header + doubles)
void save_field(const GridField& f, const std::string& path);
GridField load_field(const std::string& path);
void save_field_csv(const GridField& f, const std::string& path);

}  // namespace wz
