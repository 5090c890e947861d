#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wz/counterterm.hpp"
#include "wz/kernel.hpp"
#include "wz/noise.hpp"
#include "wz/structure.hpp"

namespace wz {

enum class LiftStage { canonical, renormalised };

/// Grid realization of the canonical / renormalised model on one noise
/// realization. Fields are evaluated over an output window [j_lo, j_hi)
/// chosen by the caller; every integration shrinks the usable window at the
/// bottom by the kernel's time support, so the noise window must extend
/// depth * support_steps below j_lo (depth = nesting of integrations).
class Lift {
  public:
    Lift(const KernelTable& K, const NoiseField& xi, const sym::AlgebraConfig& acfg,
         const CountertermTable* counter = nullptr);

    /// (Pi_x tau)(.) over [j_lo, j_hi)
    GridField lift(const sym::Tree& tau, LiftStage stage, long long jx, size_t cx,
                   long long j_lo, long long j_hi);

    /// the model character f_x on a positive tree (multiplicative)
    double f_x(const sym::Tree& tau, long long jx, size_t cx, long long j_lo);

    /// K * xi_{eps,theta} over the window (cached; the Psi lift)
    const GridField& convolved_noise(long long j_lo, long long j_hi);

  private:
    const KernelTable& K_;
    const NoiseField& xi_;
    sym::AlgebraConfig acfg_;
    const CountertermTable* ct_;
    std::map<std::string, GridField> cache_;  // key: tree/x/window/stage

    GridField eval(const sym::Tree& tau, long long jx, size_t cx, long long j_lo,
                   long long j_hi);
    GridField convolve_K(const MIdx& l, const GridField& inner, long long j_lo,
                         long long j_hi);
    double conv_at(const MIdx& l, const GridField& inner, long long j, size_t cell);
};

/// Scaling-probe test bump: a product of shifted one-dimensional bumps with
/// nonvanishing mean and first moments, parabolically rescaled.
double probe_bump(const double* u, int d);

struct ProbeRow {
    std::string tau;
    double lambda = 0;
    std::string stage;
    double second_moment = 0;
    double stderr_ = 0;
};

struct ProbeResult {
    std::vector<ProbeRow> rows;
    std::map<std::string, double> fitted_slope;  // tau -> log-log slope
};

/// Monte Carlo estimate of E |(Pi_x tau)(phi_x^lambda)|^2 across a dyadic
/// lambda list, averaged over base points, with the log-log slope per tree.
ProbeResult scaling_probe(const KernelTable& K, const sym::AlgebraConfig& acfg,
                          const Lattice& lat, double eps, double theta,
                          const std::vector<sym::Tree>& taus, LiftStage stage,
                          const std::vector<double>& lambdas, int n_mc, uint64_t seed0,
                          int n_base_points, const CountertermTable* counter);

/// pairing <F, phi_x^lambda> on the lattice
double pair_with_bump(const GridField& F, long long jx, size_t cx, double lambda);

/// Exact lattice expectation E|<Pi tau, phi^lambda>|^2 for the stationary
/// probes (tau = Psi canonical, or the renormalised Wick square Psi^2),
/// computed from the covariance machinery with the instrument's own cell
/// weights. Serves as the deterministic oracle behind the Monte Carlo probe.
double probe_expected_second_moment(const WzCov& cov, bool wick_square, double lambda);

}  // namespace wz
