#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "wz/grid.hpp"

namespace wz {

struct KernelSpec {
    Lattice lat;
    int r = 3;                    // moment-annihilation order (parabolic degree)
    int n_images = 3;             // periodization images per dimension
    double support_radius = 1.0;  // K = G on {|x|^2+t < R^2/2}, 0 on {|x|^2+t >= R^2}

    void validate() const;
};

/// periodized heat kernel on the unit torus, zero for t <= 0
double heat_kernel(double t, const double* x, int d, int n_images);

/// Tabulated space-time kernel. Slice j holds K(j dt, .); slice 0 is zero
/// (causality), the table ends where the support cutoff does.
struct KernelTable {
    Lattice lat;
    double support_radius = 1.0;
    int nsl = 0;
    std::vector<double> val;  // nsl x ncells

    // achieved lattice moments (monomial -> value), filled by build_K
    std::map<std::string, double> moments;
    double abs_mass = 0;  // integral of |K|

    const double* slice(int j) const { return val.data() + size_t(j) * lat.ncells(); }
    double* slice(int j) { return val.data() + size_t(j) * lat.ncells(); }

    /// spectral slices (spatial transform of each time slice; real by x-symmetry)
    const std::vector<double>& hat() const;
    const double* hat_slice(int j) const { return hat().data() + size_t(j) * lat.ncells(); }

    /// spatial first-derivative tables (4th order centered differences)
    const std::vector<double>& deriv(int axis) const;
    const double* deriv_slice(int axis, int j) const {
        return deriv(axis).data() + size_t(j) * lat.ncells();
    }

    /// total time support in steps: K(j dt) = 0 for j >= nsl or j <= 0
    int support_steps() const { return nsl; }

    void save(const std::string& path) const;

  private:
    mutable std::vector<double> hat_;
    mutable std::array<std::vector<double>, 3> deriv_;
};

/// Builds K = chi * G_per + moment correction: equals the periodized heat
/// kernel on {|x|^2 + t < R^2/2}, vanishes for t <= 0 and for
/// |x|^2 + t >= R^2, is even in x, and annihilates every space-time
/// monomial of parabolic degree <= spec.r on the lattice.
/// Throws std::runtime_error if the correction solve is singular.
KernelTable build_K(const KernelSpec& spec);

/// Smooth partition into parabolic annuli: sum of the pieces reproduces K,
/// piece m vanishes outside parabolic radius base_radius * 2^{-m}.
/// Piece 0 carries the outer tail.
std::vector<KernelTable> dyadic_decompose(const KernelTable& K, int n_dyadic);

/// largest parabolic norm over the support of K (the base radius used by
/// dyadic_decompose)
double kernel_base_radius(const KernelTable& K);

/// trapezoidal weight of x^p at spatial index ix (the seam cell at -1/2 is
/// averaged with its +1/2 alias so odd moments of even kernels vanish)
double monomial_weight(const Lattice& lat, int ix, int p);

/// smooth cutoff: 1 for s <= 0, 0 for s >= 1
double smoothstep_cinf(double s);

}  // namespace wz
