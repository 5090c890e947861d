#pragma once

#include <vector>

#include "wz/grid.hpp"
#include "wz/mollifier.hpp"

namespace wz {

enum class NoiseStage { white, mollified, wz };

/// A realization of the driving noise on a time window, tagged with the
/// regularisation stage it has been through.
struct NoiseField {
    GridField f;
    uint64_t seed = 0;
    NoiseStage stage = NoiseStage::white;
    double eps = 0;
    double theta = 0;
};

/// i.i.d. centered gaussians with variance 1/(dt dx^d), keyed by absolute
/// cell coordinates so enlarging or shifting the window reproduces the same
/// values on the overlap.
NoiseField sample_white(const Lattice& lat, long long j0, int nt, uint64_t seed);

/// space-time convolution with rho_eps (periodic in space, windowed in
/// time: the output window shrinks by the mollifier's time radius on each
/// side unless the caller sampled a margin; here the window is preserved
/// and edge slices use only the noise inside the window of xi, so callers
/// must sample xi with a margin of moll.jt_rad steps on both sides of the
/// region they will use).
NoiseField mollify(const NoiseField& xi, const Mollifier& moll);

/// block time-average: constant on [k theta, (k+1) theta), theta = m dt.
/// Blocks are aligned to absolute time zero. The output window is the
/// largest set of complete information: slice j is the average of xi_eps
/// over block(j), so xi_eps must cover the whole block of every output
/// slice; edge slices whose block is cut off are dropped.
NoiseField piecewise_linearize(const NoiseField& xi_eps, double theta);

/// the full two-stage regularisation of one master realization
NoiseField regularize(const NoiseField& white, double eps, double theta);

/// coupled ladder: every entry is a deterministic function of the same
/// master white noise
std::vector<NoiseField> couple_resolutions(const Lattice& lat, long long j0, int nt,
                                           uint64_t master_seed,
                                           const std::vector<std::pair<double, double>>& ladder);

}  // namespace wz
