#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "wz/counterterm.hpp"
#include "wz/holder.hpp"
#include "wz/kernel.hpp"
#include "wz/noise.hpp"
#include "wz/solver.hpp"

namespace wz {

using json = nlohmann::ordered_json;

/// K *space-time* field over [j_lo, j_hi); the field must cover
/// [j_lo - (K.nsl - 1), j_hi).
GridField kernel_convolve(const KernelTable& K, const GridField& field, long long j_lo,
                          long long j_hi);

struct LadderRung {
    double eps = 0, theta = 0;
};

struct NoiseConvConfig {
    Lattice lat;
    std::vector<LadderRung> ladder;   // coarse to fine
    int n_mc = 16;
    uint64_t seed0 = 1;
    double alpha_p = -1.9;            // measuring exponent
    std::vector<double> scales;
    long long j0 = 0;                 // master window [j0, j0+nt)
    int nt = 0;
    long long region_lo = 0, region_hi = 0;  // z-grid region for the sup
    int jobs = 1;
};

/// Prop. 3.6 style probe: mean seminorm of xi_{eps,theta} - xi per rung,
/// all rungs coupled through one master realization per seed.
json noise_convergence_experiment(const NoiseConvConfig& cfg);

struct KstarConvConfig {
    Lattice lat;
    std::vector<LadderRung> ladder;
    int n_mc = 8;
    uint64_t seed0 = 1;
    double alpha_p = -0.2;            // spatial measuring exponent
    std::vector<double> scales;
    std::vector<long long> t_steps;   // output times sampled for the sup over t
    long long j0 = 0;
    int nt = 0;
    const KernelTable* K = nullptr;
    int jobs = 1;
};

/// K * xi_{eps,theta} vs K * xi in the spatial norm, sup over sampled times.
json kstar_convergence_experiment(const KstarConvConfig& cfg);

struct SolutionConvConfig {
    Lattice lat;
    std::vector<LadderRung> ladder;
    int n_seeds = 8;
    uint64_t seed0 = 1;
    double t_eval = 0.1;
    bool renorm = true;
    int t_samples = 4;                // counterterm sampling per block
    const KernelTable* K = nullptr;   // needed when renorm
    std::string ic = "sin";
    double cap = 1e6;
    int jobs = 1;
};

/// Wong-Zakai solution ladder: distances to the finest rung and between
/// successive rungs at t_eval, aggregated over seeds.
json solution_convergence_experiment(const SolutionConvConfig& cfg);

struct KernelLemmaConfig {
    const KernelTable* K = nullptr;
    std::vector<LadderRung> ladder;
    double delta = 0.1;
    double theta_exp = 0.5;           // exponent of Lemma 4.3
    int n_pairs = 24;
    uint64_t seed = 7;
};

/// Empirical sup-ratio report for the kernel estimates (4.1), (4.2), (4.9),
/// (4.11). Report-only: flags non-finite or strongly growing constants.
json check_kernel_lemmas(const KernelLemmaConfig& cfg);

void write_json(const json& j, const std::string& path);

}  // namespace wz
