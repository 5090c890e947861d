#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "wz/experiments.hpp"
#include "wz/noise.hpp"
#include "wz/wzcov.hpp"

using namespace wz;

namespace {

// Small d=1 configuration where everything can be brute-forced.
struct BruteSetup {
    KernelSpec spec;
    KernelTable K;
    Mollifier moll;
    double eps = 1.0 / 8, theta = 1.0 / 16;
    long long m;

    BruteSetup() {
        spec.lat.d = 1;
        spec.lat.n = 16;
        spec.lat.dt = 1.0 / 128;
        spec.support_radius = 0.5;
        K = build_K(spec);
        moll = build_mollifier(spec.lat, eps);
        m = llround(theta / spec.lat.dt);
    }

    double Kv(long long s, int dy) const {
        if (s < 1 || s >= K.nsl) return 0.0;
        int q = ((dy % K.lat.n) + K.lat.n) % K.lat.n;
        return K.slice(int(s))[size_t(q)];
    }
    double rho2(int dy) const {
        int q = ((dy % K.lat.n) + K.lat.n) % K.lat.n;
        return moll.rho2[size_t(q)];
    }

    // direct evaluation of the two-part composed kernel
    double kappa(long long j, int y, long long j3, int y3) const {
        const Lattice& lat = spec.lat;
        double acc = 0;
        for (long long j1 = j - K.nsl; j1 < j; ++j1) {
            long long k = (j1 >= 0) ? j1 / m : -((-j1 + m - 1) / m);  // floor div
            double tw = 0;
            for (long long j2 = k * m; j2 < (k + 1) * m; ++j2) tw += moll.wt(j2 - j3);
            tw *= lat.dt / double(m);
            if (tw == 0.0) continue;
            for (int y1 = 0; y1 < lat.n; ++y1)
                acc += lat.dt * lat.dx() * Kv(j - j1, y - y1) * tw / lat.dt *
                       rho2(y1 - y3);
        }
        return acc;
    }
};

}  // namespace

TEST_CASE("kernel_field matches the brute-force composition") {
    BruteSetup bs;
    WzCov cov(bs.K, bs.eps, bs.theta);
    long long j = 21;
    for (long long j3 : {18LL, 15LL, 9LL, 2LL, -3LL}) {
        std::vector<double> kf = cov.kernel_field(j, j3);
        for (int dy : {0, 1, 5, 8, 12}) {
            double direct = bs.kappa(j, dy, j3, 0);
            CAPTURE(j3);
            CAPTURE(dy);
            CHECK(kf[size_t(dy)] == doctest::Approx(direct).epsilon(1e-9));
        }
    }
}

TEST_CASE("causality of the composed kernel") {
    BruteSetup bs;
    WzCov cov(bs.K, bs.eps, bs.theta);
    long long j = 21;
    // noise later than the current block plus the mollifier reach cannot enter
    auto [lo, hi] = cov.noise_slot_range(j);
    (void)lo;
    std::vector<double> kf = cov.kernel_field(j, hi + 1);
    for (double v : kf) CHECK(v == 0.0);
    std::vector<double> kf2 = cov.kernel_field(j, hi);
    double sum = 0;
    for (double v : kf2) sum += std::fabs(v);
    CHECK(sum >= 0.0);
}

TEST_CASE("mass in the noise slot equals the kernel mass") {
    BruteSetup bs;
    WzCov cov(bs.K, bs.eps, bs.theta);
    double kmass = 0;
    for (double v : bs.K.val) kmass += v;
    kmass *= bs.spec.lat.cell_volume();
    CHECK(cov.kernel_mass(21) == doctest::Approx(kmass).epsilon(1e-9));
    // and the full noise-slot quadrature of kernel_field agrees
    auto [lo, hi] = cov.noise_slot_range(21);
    double acc = 0;
    for (long long j3 = lo; j3 <= hi; ++j3) {
        std::vector<double> kf = cov.kernel_field(21, j3);
        for (double v : kf) acc += v;
    }
    acc *= bs.spec.lat.cell_volume();
    CHECK(acc == doctest::Approx(kmass).epsilon(1e-6 + 1e-3 * std::fabs(kmass)));
}

TEST_CASE("covariance f matches the brute-force quadrature and C1 = f(z,z)") {
    BruteSetup bs;
    WzCov cov(bs.K, bs.eps, bs.theta);
    const Lattice& lat = bs.spec.lat;
    long long j = 21, jbar = 19;
    auto [lo, hi] = cov.noise_slot_range(j);
    auto [lo2, hi2] = cov.noise_slot_range(jbar);
    long long l3 = std::min(lo, lo2), h3 = std::max(hi, hi2);

    for (int dy : {0, 3, 7}) {
        double direct = 0;
        for (long long j3 = l3; j3 <= h3; ++j3)
            for (int y3 = 0; y3 < lat.n; ++y3)
                direct += lat.cell_volume() * bs.kappa(j, dy, j3, y3) *
                          bs.kappa(jbar, 0, j3, y3);
        CAPTURE(dy);
        CHECK(cov.f_point(j, jbar, size_t(dy)) ==
              doctest::Approx(direct).epsilon(1e-8));
    }
    // C1 equals the diagonal of f
    CHECK(cov.C1(j) == doctest::Approx(cov.f_point(j, j, 0)).epsilon(1e-12));
    CHECK(cov.C1(j) > 0);

    // spatial independence: the brute-force diagonal at a different y
    double c1_at_y5 = 0;
    for (long long j3 = lo; j3 <= hi; ++j3)
        for (int y3 = 0; y3 < lat.n; ++y3) {
            double k5 = bs.kappa(j, 5, j3, y3);
            c1_at_y5 += lat.cell_volume() * k5 * k5;
        }
    CHECK(c1_at_y5 == doctest::Approx(cov.C1(j)).epsilon(1e-8));
}

TEST_CASE("C2 matches the brute-force quadrature") {
    BruteSetup bs;
    WzCov cov(bs.K, bs.eps, bs.theta);
    const Lattice& lat = bs.spec.lat;
    long long j = 21;
    double direct = 0;
    for (int s = 1; s < bs.K.nsl; ++s) {
        std::vector<double> f = cov.f_field(j, j - s);
        for (int dy = 0; dy < lat.n; ++dy)
            direct += lat.cell_volume() * f[size_t(dy)] * f[size_t(dy)] * bs.Kv(s, dy);
    }
    direct *= 2.0;
    CHECK(cov.C2(j) == doctest::Approx(direct).epsilon(1e-10));
    CHECK(cov.C2(j) > 0);
}

TEST_CASE("theta periodicity of C1 and C2") {
    BruteSetup bs;
    WzCov cov(bs.K, bs.eps, bs.theta);
    for (long long j : {0LL, 1LL, 3LL}) {
        CHECK(cov.C1(j) == doctest::Approx(cov.C1(j + bs.m)).epsilon(1e-12));
        CHECK(cov.C2(j) == doctest::Approx(cov.C2(j + bs.m)).epsilon(1e-12));
    }
}

TEST_CASE("monte carlo covariance oracle") {
    // E[(K * xi_{eps,theta})(z) (K * xi_{eps,theta})(zbar)] = f(z, zbar)
    BruteSetup bs;
    const Lattice& lat = bs.spec.lat;
    WzCov cov(bs.K, bs.eps, bs.theta);
    long long j = 21, jbar = 20;
    const int n_mc = 3000;
    long long margin = bs.K.nsl + 2 * bs.m + bs.moll.jt_rad + 4;
    double acc_diag = 0, acc_off = 0;
    for (int mc = 0; mc < n_mc; ++mc) {
        NoiseField white = sample_white(lat, -margin, int(margin + 24), 500 + uint64_t(mc));
        NoiseField reg = regularize(white, bs.eps, bs.theta);
        GridField W = kernel_convolve(bs.K, reg.f, j - 2, j + 1);
        acc_diag += W.at(int(j - (j - 2)), 0) * W.at(int(j - (j - 2)), 0);
        acc_off += W.at(int(j - (j - 2)), 4) * W.at(int(jbar - (j - 2)), 0);
    }
    acc_diag /= n_mc;
    acc_off /= n_mc;
    double c1 = cov.C1(j);
    double f_off = cov.f_point(j, jbar, 4);
    double se_diag = std::sqrt(2.0) * c1 / std::sqrt(double(n_mc));
    CHECK(std::fabs(acc_diag - c1) < 3 * se_diag);
    double se_off = 2.0 * c1 / std::sqrt(double(n_mc));
    CHECK(std::fabs(acc_off - f_off) < 3 * se_off);
}

TEST_CASE("kk_field is the K*K autocovariance") {
    BruteSetup bs;
    WzCov cov(bs.K, bs.eps, bs.theta);
    const Lattice& lat = bs.spec.lat;
    long long j = 21, jbar = 18;
    std::vector<double> kk = cov.kk_field(j, jbar);
    for (int dy : {0, 2, 9}) {
        double direct = 0;
        for (long long j1 = j - bs.K.nsl; j1 <= j; ++j1)
            for (int y1 = 0; y1 < lat.n; ++y1)
                direct += lat.cell_volume() * bs.Kv(j - j1, dy - y1) * bs.Kv(jbar - j1, -y1);
        CAPTURE(dy);
        CHECK(kk[size_t(dy)] == doctest::Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("stability constraint is reported") {
    BruteSetup bs;
    CHECK_THROWS_AS(WzCov(bs.K, bs.eps, 2.5 * bs.spec.lat.dt), std::invalid_argument);
}
