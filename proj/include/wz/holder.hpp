#pragma once

#include <vector>

#include "wz/grid.hpp"

namespace wz {

/// Parabolic Hölder-seminorm estimate from scaled test-function pairings on
/// dyadic grids: per scale, sup_z lambda^{-alpha'} |<field, phi_z^lambda>|;
/// the seminorm is the max over the scale table.
struct HolderEstimate {
    double alpha_p = 0;
    std::vector<double> scales;
    std::vector<double> sup_pairing;
    std::vector<double> scaled;
    double seminorm = 0;

    /// least-squares exponent of log sup_pairing against log lambda
    double fitted_exponent() const;
};

/// pairing with the centered parabolic bump at scale lambda
double holder_pair(const GridField& F, long long jz, size_t cz, double lambda);

/// parabolic seminorm over z in [region_j_lo, region_j_hi) x T^d.
/// Scales must satisfy lambda >= 4 dx and alpha' < 0.
HolderEstimate holder_seminorm(const GridField& F, double alpha_p,
                               const std::vector<double>& scales, long long region_j_lo,
                               long long region_j_hi);

/// purely spatial variant on a single time slice (scaling (1,...,1))
double spatial_holder_pair(const GridField& F, int j, size_t cz, double lambda);
HolderEstimate spatial_holder_seminorm(const GridField& F, int j, double alpha_p,
                                       const std::vector<double>& scales);

}  // namespace wz
