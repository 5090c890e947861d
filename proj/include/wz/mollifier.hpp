#pragma once

#include <vector>

#include "wz/grid.hpp"

namespace wz {

/// smooth bump exp(-1/(1-s^2)) on (-1,1), zero outside (not normalized)
double bump(double s);

/// Product mollifier rho_eps(t,x) = eps^{-(d+2)} rho1(t/eps^2) rho2(x/eps)
/// sampled on the lattice and renormalized so the discrete mass is exactly 1
/// in each factor. When eps^2 falls below dt the time factor degenerates to
/// a single cell, the purely-spatial variant of the regularisation.
struct Mollifier {
    Lattice lat;
    double eps = 0;

    // time weights w_time[j + jt_rad] ~ rho_{1,eps}(j dt), sum * dt = 1
    std::vector<double> w_time;
    int jt_rad = 0;

    // spatial profile and its transform (rho2 is even, the transform real)
    std::vector<double> rho2;        // one slice, cell-indexed
    std::vector<cplx> rho2_hat;      // spatial_fft of rho2

    double wt(long long dj) const {
        long long i = dj + jt_rad;
        if (i < 0 || i >= (long long)w_time.size()) return 0.0;
        return w_time[size_t(i)];
    }
    int time_taps() const { return int(w_time.size()); }

    /// discrete mass of the full space-time mollifier (should be 1)
    double mass() const;
};

/// Builds the sampled mollifier. Requires eps >= 2 dx so the spatial bump is
/// resolvable; throws otherwise.
Mollifier build_mollifier(const Lattice& lat, double eps);

}  // namespace wz
