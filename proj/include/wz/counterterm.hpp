#pragma once

#include <string>
#include <vector>

#include "wz/wzcov.hpp"

namespace wz {

/// Sampled renormalisation functions on one block period [0, theta):
/// C_i(t + theta) = C_i(t), and the PDE coefficient c(t) = 3 C1(t) - 9 C2(t).
struct CountertermTable {
    double eps = 0, theta = 0;
    long long m = 1;                 // theta / dt
    std::vector<long long> j_off;    // sampled offsets in [0, m)
    std::vector<double> C1, C2;

    double c_at_step(long long j) const;  // piecewise-linear in t mod theta
    double c1_at_step(long long j) const;
    void save_csv(const std::string& path) const;
};

CountertermTable compute_counterterms(const WzCov& cov, int t_samples, bool with_c2 = true);

/// least-squares slope of log C1 against log eps
double fit_log_slope(const std::vector<double>& eps, const std::vector<double>& val);

/// increments of C2 across successive halvings (log-divergence diagnostic)
std::vector<double> halving_increments(const std::vector<double>& val);

}  // namespace wz
