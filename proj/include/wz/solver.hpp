#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wz/counterterm.hpp"
#include "wz/grid.hpp"
#include "wz/noise.hpp"

namespace wz {

/// Semi-implicit spectral integrator for
///   dPhi = Lap Phi + c(t) Phi - Phi^3 + xi_{eps,theta}
/// on the unit torus: the Laplacian is integrated exactly in Fourier space,
/// the reaction terms and the noise go in explicitly.
struct SolverConfig {
    Lattice lat;
    double t_final = 0.25;
    bool renorm = false;       // off: c(t) == 0 (the unrenormalised map)
    bool cube = true;          // disable for linear regression tests
    bool dealias = true;       // 2/3 rule on the cubic term (default on for d >= 2)
    double blowup_cap = 1e6;
    std::string ic = "sin";    // "sin" | "zero" | "constant:<a>"
};

struct SolverState {
    Lattice lat;
    long long j = 0;                  // absolute time step
    std::vector<cplx> phi_hat;        // spectral field (plain DFT of the slice)
    const NoiseField* noise = nullptr;
    const CountertermTable* counter = nullptr;

    std::vector<double> real_field() const;
    double max_abs() const;
};

struct Trajectory {
    bool blew_up = false;
    long long stop_step = 0;
    std::vector<long long> snap_steps;
    std::vector<std::vector<double>> snaps;  // real fields
};

SolverState make_state(const SolverConfig& cfg, const NoiseField* noise,
                       const CountertermTable* counter);

/// one explicit exponential-Euler step; returns false on blow-up
bool step(SolverState& st, const SolverConfig& cfg);

/// integrate from t=0 to t_final, recording snapshots at the given steps
Trajectory run(const SolverConfig& cfg, const NoiseField* noise,
               const CountertermTable* counter, const std::vector<long long>& snap_steps);

/// exact spectral Laplacian multiplier for mode index q (per axis, signed)
double laplacian_eigenvalue(const Lattice& lat, const int* q);

}  // namespace wz
