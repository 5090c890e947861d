#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "wz/noise.hpp"

using namespace wz;

namespace {

Lattice lat1d() {
    Lattice lat;
    lat.d = 1;
    lat.n = 128;
    lat.dt = 1.0 / 512;
    return lat;
}

}  // namespace

TEST_CASE("white noise variance matches 1/(dt dx^d)") {
    Lattice lat = lat1d();
    NoiseField xi = sample_white(lat, 0, 8192, 42);  // ~1e6 cells
    double s2 = 0;
    for (double v : xi.f.v) s2 += v * v;
    s2 /= double(xi.f.v.size());
    double expect = 1.0 / lat.cell_volume();
    CHECK(s2 == doctest::Approx(expect).epsilon(0.01));
    double mean = 0;
    for (double v : xi.f.v) mean += v;
    mean /= double(xi.f.v.size());
    CHECK(std::fabs(mean) < 3 * std::sqrt(expect / double(xi.f.v.size())));
}

TEST_CASE("same seed reproduces, distinct seeds decorrelate") {
    Lattice lat = lat1d();
    NoiseField a = sample_white(lat, -7, 512, 5);
    NoiseField b = sample_white(lat, -7, 512, 5);
    CHECK(a.f.v == b.f.v);
    NoiseField c = sample_white(lat, -7, 512, 6);
    double dot = 0, na = 0, nc = 0;
    for (size_t i = 0; i < a.f.v.size(); ++i) {
        dot += a.f.v[i] * c.f.v[i];
        na += a.f.v[i] * a.f.v[i];
        nc += c.f.v[i] * c.f.v[i];
    }
    CHECK(std::fabs(dot / std::sqrt(na * nc)) < 0.01);
}

TEST_CASE("window extension preserves overlapping cells") {
    Lattice lat = lat1d();
    NoiseField a = sample_white(lat, 0, 64, 9);
    NoiseField b = sample_white(lat, -32, 128, 9);
    for (int j = 0; j < 64; ++j)
        for (size_t c = 0; c < lat.ncells(); ++c)
            CHECK(a.f.at(j, c) == b.f.at(j + 32, c));
}

TEST_CASE("mollification smooths and preserves constants") {
    Lattice lat = lat1d();
    Mollifier mo = build_mollifier(lat, 1.0 / 16);
    NoiseField xi = sample_white(lat, -64, 1024, 11);
    NoiseField xe = mollify(xi, mo);
    CHECK(xe.stage == NoiseStage::mollified);
    // variance reduction
    double v0 = 0, v1 = 0;
    size_t skip = 64 * lat.ncells();  // interior only
    for (size_t i = skip; i < xi.f.v.size() - skip; ++i) {
        v0 += xi.f.v[i] * xi.f.v[i];
        v1 += xe.f.v[i] * xe.f.v[i];
    }
    CHECK(v1 < 0.5 * v0);
    // constant field passes through exactly (discrete mass one)
    NoiseField one;
    one.f = GridField(lat, 0, 256);
    one.stage = NoiseStage::white;
    std::fill(one.f.v.begin(), one.f.v.end(), 1.0);
    NoiseField oe = mollify(one, mo);
    for (int j = mo.jt_rad; j < oe.f.nt - mo.jt_rad; ++j)
        for (size_t c = 0; c < lat.ncells(); ++c)
            CHECK(oe.f.at(j, c) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("mollified covariance matches the rho * rho quadrature") {
    Lattice lat;
    lat.d = 1;
    lat.n = 64;
    lat.dt = 1.0 / 256;
    double eps = 1.0 / 8;
    Mollifier mo = build_mollifier(lat, eps);
    // E[xi_eps(z) xi_eps(z + h)] = (rho_eps * rho_eps)(h) on the lattice
    const int n_mc = 4000;
    const int jprobe = 40, cprobe = 10;
    std::vector<std::pair<int, int>> offsets = {{0, 0}, {1, 0}, {0, 3}, {2, 2}, {4, 0}};
    std::vector<double> acc(offsets.size(), 0.0);
    for (int mc = 0; mc < n_mc; ++mc) {
        NoiseField xi = sample_white(lat, 0, 80, 100 + uint64_t(mc));
        NoiseField xe = mollify(xi, mo);
        for (size_t oi = 0; oi < offsets.size(); ++oi)
            acc[oi] += xe.f.at(jprobe, cprobe) *
                       xe.f.at(jprobe + offsets[oi].first,
                               size_t((cprobe + offsets[oi].second) % lat.n));
    }
    for (size_t oi = 0; oi < offsets.size(); ++oi) {
        acc[oi] /= n_mc;
        // quadrature of the autocorrelation
        double expect = 0;
        for (int dj = -mo.jt_rad; dj <= mo.jt_rad; ++dj) {
            int dj2 = dj + offsets[oi].first;
            double wt2 = mo.wt(dj2);
            if (wt2 == 0.0) continue;
            for (int c = 0; c < lat.n; ++c) {
                int c2 = (c + offsets[oi].second) % lat.n;
                expect += mo.wt(dj) * wt2 * mo.rho2[size_t(c)] * mo.rho2[size_t(c2)];
            }
        }
        expect *= lat.dt * lat.dx();
        // three standard errors of the MC mean
        double se = std::sqrt(2.0) * std::fabs(acc[0]) / std::sqrt(double(n_mc));
        CAPTURE(oi);
        CHECK(std::fabs(acc[oi] - expect) < 3 * se + 1e-12);
    }
}

TEST_CASE("block averaging: fixed point, sum preservation, spectral cut") {
    Lattice lat = lat1d();
    double theta = 16 * lat.dt;
    NoiseField xi = sample_white(lat, -32, 576, 21);
    Mollifier mo = build_mollifier(lat, 1.0 / 16);
    NoiseField xe = mollify(xi, mo);
    NoiseField xw = piecewise_linearize(xe, theta);
    CHECK(xw.stage == NoiseStage::wz);
    CHECK(xw.f.j0 % 16 == 0);
    // block sums preserved
    for (long long k = xw.f.j0 / 16; k < (xw.f.j0 + xw.f.nt) / 16; ++k) {
        for (size_t c = 0; c < lat.ncells(); c += 17) {
            double sin_ = 0, sout = 0;
            for (long long j = k * 16; j < (k + 1) * 16; ++j) {
                sin_ += xe.f.slice_abs(j)[c];
                sout += xw.f.slice_abs(j)[c];
            }
            CHECK(sout == doctest::Approx(sin_).epsilon(1e-10));
        }
    }
    // constant-in-time input is a fixed point
    NoiseField cst;
    cst.f = GridField(lat, 0, 64);
    cst.stage = NoiseStage::mollified;
    for (int j = 0; j < 64; ++j)
        for (size_t c = 0; c < lat.ncells(); ++c) cst.f.at(j, c) = double(c % 5) - 2.0;
    NoiseField cw = piecewise_linearize(cst, theta);
    for (int j = 0; j < cw.f.nt; ++j)
        for (size_t c = 0; c < lat.ncells(); ++c)
            CHECK(cw.f.at(j, c) == cst.f.at(0, c));
    // power at the first suppressed temporal frequency drops
    {
        int nt = 512;
        std::vector<std::complex<double>> se(nt), sw(nt);
        for (int j = 0; j < nt; ++j) {
            se[size_t(j)] = xe.f.slice_abs(j)[3];
            sw[size_t(j)] = xw.f.slice_abs(j)[3];
        }
        fft_inplace(se.data(), size_t(nt), false);
        fft_inplace(sw.data(), size_t(nt), false);
        // theta = 16 dt, window nt dt: first suppressed mode index nt/16
        int k = nt / 16;
        double pe = std::norm(se[size_t(k)]) + std::norm(se[size_t(nt - k)]);
        double pw = std::norm(sw[size_t(k)]) + std::norm(sw[size_t(nt - k)]);
        CHECK(pw < 0.2 * pe);
    }
}

TEST_CASE("theta must be a lattice multiple") {
    Lattice lat = lat1d();
    NoiseField xi = sample_white(lat, 0, 64, 2);
    xi.stage = NoiseStage::mollified;
    CHECK_THROWS_AS(piecewise_linearize(xi, 2.5 * lat.dt), std::invalid_argument);
}

TEST_CASE("coupling: ladder members correlate on low modes") {
    Lattice lat = lat1d();
    std::vector<std::pair<double, double>> ladder = {{1.0 / 8, 1.0 / 16},
                                                     {1.0 / 32, 1.0 / 256}};
    auto fields = couple_resolutions(lat, -64, 640, 77, ladder);
    REQUIRE(fields.size() == 2);
    // common window
    long long lo = std::max(fields[0].f.j0, fields[1].f.j0);
    long long hi = std::min(fields[0].f.j0 + fields[0].f.nt,
                            fields[1].f.j0 + fields[1].f.nt);
    // correlation of spatial mode 1 at the coarse block resolution: average
    // both members over the coarse blocks so the comparison sees the common
    // low-frequency content
    long long mblk = llround(ladder[0].second / lat.dt);
    std::vector<double> a, b;
    for (long long k = lo / mblk + 1; (k + 1) * mblk <= hi; ++k) {
        double ca = 0, cb = 0;
        for (long long j = k * mblk; j < (k + 1) * mblk; ++j)
            for (int c = 0; c < lat.n; ++c) {
                double ph = std::cos(2 * M_PI * double(c) / lat.n);
                ca += fields[0].f.slice_abs(j)[size_t(c)] * ph;
                cb += fields[1].f.slice_abs(j)[size_t(c)] * ph;
            }
        a.push_back(ca);
        b.push_back(cb);
    }
    double dot = 0, na = 0, nb = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    CHECK(dot / std::sqrt(na * nb) > 0.5);

    // single-rung list equals the two-stage pipeline
    NoiseField master = sample_white(lat, -64, 640, 77);
    NoiseField direct = regularize(master, 1.0 / 8, 1.0 / 16);
    CHECK(direct.f.v == fields[0].f.v);
    CHECK(direct.f.j0 == fields[0].f.j0);

    // permuting the ladder permutes outputs with no value change
    std::vector<std::pair<double, double>> rev = {ladder[1], ladder[0]};
    auto swapped = couple_resolutions(lat, -64, 640, 77, rev);
    CHECK(swapped[1].f.v == fields[0].f.v);
    CHECK(swapped[0].f.v == fields[1].f.v);
}

TEST_CASE("stationarity: spatial shift of the master shifts derived fields") {
    Lattice lat;
    lat.d = 1;
    lat.n = 64;
    lat.dt = 1.0 / 256;
    NoiseField master = sample_white(lat, -32, 192, 13);
    // shifted copy of the master (roll by 5 cells)
    NoiseField shifted = master;
    for (int j = 0; j < master.f.nt; ++j)
        for (int c = 0; c < lat.n; ++c)
            shifted.f.at(j, size_t(c)) = master.f.at(j, size_t((c + 5) % lat.n));
    NoiseField a = regularize(master, 1.0 / 8, 1.0 / 16);
    NoiseField b = regularize(shifted, 1.0 / 8, 1.0 / 16);
    for (int j = 0; j < a.f.nt; ++j)
        for (int c = 0; c < lat.n; ++c)
            CHECK(b.f.at(j, size_t(c)) ==
                  doctest::Approx(a.f.at(j, size_t((c + 5) % lat.n))).epsilon(1e-10));
}
