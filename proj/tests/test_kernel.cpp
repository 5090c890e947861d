#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wz/kernel.hpp"
#include "wz/rng.hpp"

using namespace wz;

namespace {

KernelSpec spec1d() {
    KernelSpec s;
    s.lat.d = 1;
    s.lat.n = 128;
    s.lat.dt = 1.0 / 512;
    return s;
}

}  // namespace

TEST_CASE("heat kernel mass conservation on the torus") {
    for (int d : {1, 2, 3}) {
        int n = d == 3 ? 32 : 128;
        double dx = 1.0 / n;
        for (double t : {0.002, 0.01, 0.05}) {
            double mass = 0;
            int total = 1;
            for (int i = 0; i < d; ++i) total *= n;
            for (int c = 0; c < total; ++c) {
                double x[3] = {0, 0, 0};
                int idx = c;
                for (int i = d - 1; i >= 0; --i) {
                    int q = idx % n;
                    idx /= n;
                    x[i] = q * dx >= 0.5 ? q * dx - 1.0 : q * dx;
                }
                mass += heat_kernel(t, x, d, 3) * std::pow(dx, d);
            }
            CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("heat kernel closed form and symmetry") {
    double x = 0.0;
    CHECK(heat_kernel(0.01, &x, 1, 3) ==
          doctest::Approx(1.0 / std::sqrt(4 * M_PI * 0.01)).epsilon(1e-10));
    double xp = 0.25, xm = -0.25;
    CHECK(heat_kernel(0.02, &xp, 1, 3) == heat_kernel(0.02, &xm, 1, 3));
    CHECK(heat_kernel(0.0, &x, 1, 3) == 0.0);
    CHECK(heat_kernel(-1.0, &x, 1, 3) == 0.0);
}

TEST_CASE("K equals the heat kernel on the inner region and is causal") {
    KernelSpec s = spec1d();
    KernelTable K = build_K(s);
    // slice 0 (t = 0) is identically zero
    for (size_t c = 0; c < K.lat.ncells(); ++c) CHECK(K.slice(0)[c] == 0.0);
    int checked = 0;
    for (int j = 1; j < K.nsl; j += 7) {
        double t = j * K.lat.dt;
        for (size_t c = 0; c < K.lat.ncells(); c += 11) {
            double x = torus_coord(K.lat, int(c));
            if (x * x + t >= 0.5) continue;
            double g = heat_kernel(t, &x, 1, s.n_images);
            CHECK(K.slice(j)[c] == doctest::Approx(g).epsilon(1e-8));
            ++checked;
        }
    }
    CHECK(checked > 50);
}

TEST_CASE("K annihilates moments up to parabolic degree r") {
    KernelSpec s = spec1d();
    KernelTable K = build_K(s);
    for (const auto& [name, value] : K.moments) {
        CAPTURE(name);
        CHECK(std::fabs(value) < 1e-8 * K.abs_mass);
    }
}

TEST_CASE("K is even in x") {
    KernelSpec s = spec1d();
    KernelTable K = build_K(s);
    for (int j = 1; j < K.nsl; j += 13)
        for (int c = 1; c < K.lat.n; ++c)
            CHECK(K.slice(j)[size_t(c)] ==
                  doctest::Approx(K.slice(j)[size_t(K.lat.n - c)]).epsilon(1e-13));
}

TEST_CASE("dyadic decomposition is a partition with localized pieces") {
    KernelSpec s = spec1d();
    KernelTable K = build_K(s);
    int nd = 4;
    auto parts = dyadic_decompose(K, nd);
    double R0 = kernel_base_radius(K);
    // partition of unity at scattered points
    for (int probe = 0; probe < 100; ++probe) {
        uint64_t h = counter_hash(5, 0, probe, 0, 0);
        int j = 1 + int(h % uint64_t(K.nsl - 1));
        size_t c = size_t(counter_hash(5, 1, probe, 0, 0) % K.lat.ncells());
        double acc = 0;
        for (const auto& p : parts) acc += p.slice(j)[c];
        CHECK(acc == doctest::Approx(K.slice(j)[c]).epsilon(1e-10));
    }
    // supports shrink dyadically
    for (int m = 1; m <= nd; ++m) {
        double rad = R0 / std::pow(2.0, m);
        for (int j = 1; j < K.nsl; ++j)
            for (size_t c = 0; c < K.lat.ncells(); c += 3) {
                if (parts[size_t(m)].slice(j)[c] == 0.0) continue;
                CHECK(parabolic_norm(K.lat, j * K.lat.dt, c) <= rad * (1 + 1e-9));
            }
    }
    // sup bound: sup |K_m| <= C 2^{m(d-1)}; fitted constants stable within 2x
    // (at d = 1 the bound is scale-free, C_m itself should stay bounded)
    std::vector<double> cs;
    for (int m = 2; m <= nd; ++m) {
        double sup = 0;
        for (double v : parts[size_t(m)].val) sup = std::max(sup, std::fabs(v));
        double c = sup / std::pow(2.0, m * (K.lat.d - 1));
        if (sup > 0) cs.push_back(c);
    }
    REQUIRE(cs.size() >= 2);
    double cmin = cs[0], cmax = cs[0];
    for (double c : cs) {
        cmin = std::min(cmin, c);
        cmax = std::max(cmax, c);
    }
    CHECK(cmax <= 16.0 * cmin);  // desk-scale stability across levels
}

TEST_CASE("over-deep decomposition rejected") {
    KernelSpec s = spec1d();
    KernelTable K = build_K(s);
    CHECK_THROWS_AS(dyadic_decompose(K, 12), std::invalid_argument);
}

TEST_CASE("derivative tables differentiate") {
    KernelSpec s = spec1d();
    KernelTable K = build_K(s);
    int j = K.nsl / 4;
    const double* dk = K.deriv_slice(0, j);
    const double* k = K.slice(j);
    // compare fourth-order differences against a straightforward secant
    for (int c = 4; c < K.lat.n - 4; c += 9) {
        double secant = (k[c + 1] - k[c - 1]) / (2 * K.lat.dx());
        CHECK(dk[c] == doctest::Approx(secant).epsilon(0.02));
    }
}

TEST_CASE("3d kernel build is consistent") {
    KernelSpec s;
    s.lat.d = 3;
    s.lat.n = 16;
    s.lat.dt = 1.0 / 128;
    s.support_radius = 0.75;
    KernelTable K = build_K(s);
    for (const auto& [name, value] : K.moments) {
        CAPTURE(name);
        CHECK(std::fabs(value) < 1e-8 * K.abs_mass);
    }
    // inner region identity
    int j = 2;
    double t = j * K.lat.dt;
    double x[3] = {K.lat.dx(), 0, -2 * K.lat.dx()};
    int ixc[3] = {1, 0, 14};
    size_t cell = spatial_index(K.lat, ixc);
    double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    REQUIRE(r2 + t < 0.5 * 0.75 * 0.75);
    CHECK(K.slice(j)[cell] == doctest::Approx(heat_kernel(t, x, 3, 3)).epsilon(1e-8));
}
