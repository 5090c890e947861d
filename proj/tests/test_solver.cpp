#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wz/solver.hpp"

using namespace wz;

TEST_CASE("linear step is exact per Fourier mode") {
    SolverConfig cfg;
    cfg.lat.d = 1;
    cfg.lat.n = 32;
    cfg.lat.dt = 1.0 / 256;
    cfg.cube = false;
    cfg.ic = "zero";
    SolverState st = make_state(cfg, nullptr, nullptr);
    // inject a single mode k = 3
    int k = 3;
    st.phi_hat.assign(st.phi_hat.size(), cplx(0, 0));
    st.phi_hat[size_t(k)] = cplx(1.0, 0.0);
    st.phi_hat[size_t(cfg.lat.n - k)] = cplx(1.0, 0.0);
    const int n_steps = 10;
    for (int i = 0; i < n_steps; ++i) REQUIRE(step(st, cfg));
    double lambda = -4.0 * M_PI * M_PI * double(k) * double(k);
    double expect = std::exp(lambda * cfg.lat.dt * n_steps);
    CHECK(std::abs(st.phi_hat[size_t(k)] - cplx(expect, 0)) < 1e-12);
    for (int q = 0; q < cfg.lat.n; ++q) {
        if (q == k || q == cfg.lat.n - k) continue;
        CHECK(std::abs(st.phi_hat[size_t(q)]) < 1e-14);
    }
}

TEST_CASE("constant field follows the cubic ODE") {
    // a' = -a^3, a(0) = 1  =>  a(t) = 1/sqrt(1 + 2t)
    SolverConfig cfg;
    cfg.lat.d = 1;
    cfg.lat.n = 4;
    cfg.lat.dt = 1e-6;
    cfg.t_final = 1.0;
    cfg.ic = "constant:1";
    cfg.dealias = false;
    long long n_steps = llround(cfg.t_final / cfg.lat.dt);
    SolverState st = make_state(cfg, nullptr, nullptr);
    for (long long i = 0; i < n_steps; ++i) REQUIRE(step(st, cfg));
    double a = st.real_field()[0];
    CHECK(std::fabs(a - 1.0 / std::sqrt(3.0)) < 1e-6);
}

TEST_CASE("deterministic replay") {
    SolverConfig cfg;
    cfg.lat.d = 1;
    cfg.lat.n = 64;
    cfg.lat.dt = 1.0 / 512;
    cfg.t_final = 0.125;
    NoiseField white = sample_white(cfg.lat, -80, 160, 3);
    NoiseField reg = regularize(white, 1.0 / 16, 1.0 / 32);
    Trajectory a = run(cfg, &reg, nullptr, {32, 64});
    Trajectory b = run(cfg, &reg, nullptr, {32, 64});
    REQUIRE(a.snaps.size() == 2);
    CHECK(a.snaps[0] == b.snaps[0]);
    CHECK(a.snaps[1] == b.snaps[1]);
}

TEST_CASE("self-convergence against a fine-dt reference") {
    // same wz noise on both grids: theta-blocks subsample exactly
    Lattice fine;
    fine.d = 1;
    fine.n = 64;
    fine.dt = 1.0 / 16384;
    Lattice coarse = fine;
    coarse.dt = 1.0 / 4096;
    const int ratio = 4;
    double eps = 1.0 / 4, theta = 1.0 / 32;
    double T = 0.125;

    NoiseField white = sample_white(fine, -llround(3 * theta / fine.dt),
                                    int(llround((T + 6 * theta) / fine.dt)), 17);
    NoiseField reg_fine = regularize(white, eps, theta);
    // subsample: the wz field is constant within theta-blocks
    long long nt_c = llround(T / coarse.dt) + 8;
    NoiseField reg_coarse;
    reg_coarse.f = GridField(coarse, 0, int(nt_c));
    reg_coarse.stage = NoiseStage::wz;
    reg_coarse.eps = eps;
    reg_coarse.theta = theta;
    for (int j = 0; j < reg_coarse.f.nt; ++j) {
        const double* src = reg_fine.f.slice_abs((long long)j * ratio);
        std::copy(src, src + fine.ncells(), reg_coarse.f.slice(j));
    }

    SolverConfig cf;
    cf.lat = fine;
    cf.t_final = T;
    cf.ic = "sin";
    SolverConfig cc = cf;
    cc.lat = coarse;
    long long jf = llround(T / fine.dt), jc = llround(T / coarse.dt);
    Trajectory tf = run(cf, &reg_fine, nullptr, {jf});
    Trajectory tc = run(cc, &reg_coarse, nullptr, {jc});
    REQUIRE_FALSE(tf.blew_up);
    REQUIRE_FALSE(tc.blew_up);
    double sup = 0;
    for (size_t i = 0; i < tf.snaps[0].size(); ++i)
        sup = std::max(sup, std::fabs(tf.snaps[0][i] - tc.snaps[0][i]));
    CHECK(sup < 1e-3);
}

TEST_CASE("blow-up is detected and reported") {
    SolverConfig cfg;
    cfg.lat.d = 1;
    cfg.lat.n = 16;
    cfg.lat.dt = 1.0 / 64;
    cfg.t_final = 0.5;
    cfg.ic = "constant:100";
    cfg.blowup_cap = 50.0;
    Trajectory tr = run(cfg, nullptr, nullptr, {});
    CHECK(tr.blew_up);
    CHECK(tr.stop_step == 0);  // cap already exceeded at the initial state
}

TEST_CASE("renormalisation mode requires a table") {
    SolverConfig cfg;
    cfg.lat.d = 1;
    cfg.lat.n = 16;
    cfg.renorm = true;
    CHECK_THROWS_AS(make_state(cfg, nullptr, nullptr), std::invalid_argument);
}

TEST_CASE("dt refinement self-consistency for a smooth deterministic run") {
    SolverConfig a;
    a.lat.d = 1;
    a.lat.n = 64;
    a.lat.dt = 1.0 / 512;
    a.t_final = 0.1;
    a.ic = "sin";
    SolverConfig b = a;
    b.lat.dt = 1.0 / 1024;
    Trajectory ta = run(a, nullptr, nullptr, {llround(0.1 / a.lat.dt)});
    Trajectory tb = run(b, nullptr, nullptr, {llround(0.1 / b.lat.dt)});
    double num = 0, den = 0;
    for (size_t i = 0; i < ta.snaps[0].size(); ++i) {
        num += (ta.snaps[0][i] - tb.snaps[0][i]) * (ta.snaps[0][i] - tb.snaps[0][i]);
        den += tb.snaps[0][i] * tb.snaps[0][i];
    }
    CHECK(std::sqrt(num / den) < 1e-2);
}
