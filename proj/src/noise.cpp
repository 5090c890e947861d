#include "wz/noise.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "wz/rng.hpp"

namespace wz {

NoiseField sample_white(const Lattice& lat, long long j0, int nt, uint64_t seed) {
    lat.validate();
    NoiseField out;
    out.f = GridField(lat, j0, nt);
    out.seed = seed;
    out.stage = NoiseStage::white;
    double scale = 1.0 / std::sqrt(lat.cell_volume());
    size_t nc = lat.ncells();
    for (int j = 0; j < nt; ++j) {
        double* s = out.f.slice(j);
        long long ja = j0 + j;
        for (size_t c = 0; c < nc; ++c) s[c] = scale * gaussian_at(seed, 0, ja, c);
    }
    return out;
}

NoiseField mollify(const NoiseField& xi, const Mollifier& moll) {
    if (xi.stage != NoiseStage::white)
        throw std::invalid_argument("mollify: expected a white-stage field");
    if (!(xi.f.lat == moll.lat))
        throw std::invalid_argument("mollify: lattice mismatch");
    const Lattice& lat = xi.f.lat;
    size_t nc = lat.ncells();

    // spatial convolution per slice, in Fourier space
    std::vector<std::vector<cplx>> spat(xi.f.nt);
    for (int j = 0; j < xi.f.nt; ++j) {
        spat[size_t(j)] = spatial_fft(xi.f.slice(j), lat.d, lat.n);
        for (size_t c = 0; c < nc; ++c) spat[size_t(j)][c] *= moll.rho2_hat[c];
    }
    // time convolution with the sampled rho1 weights
    NoiseField out;
    out.f = GridField(lat, xi.f.j0, xi.f.nt);
    out.seed = xi.seed;
    out.stage = NoiseStage::mollified;
    out.eps = moll.eps;
    std::vector<cplx> acc(nc);
    for (int j = 0; j < xi.f.nt; ++j) {
        std::fill(acc.begin(), acc.end(), cplx(0, 0));
        for (int djj = -moll.jt_rad; djj <= moll.jt_rad; ++djj) {
            int js = j - djj;
            if (js < 0 || js >= xi.f.nt) continue;
            double w = moll.wt(djj) * lat.dt;
            if (w == 0.0) continue;
            const auto& src = spat[size_t(js)];
            for (size_t c = 0; c < nc; ++c) acc[c] += w * src[c];
        }
        spatial_ifft(acc, lat.d, lat.n, out.f.slice(j));
    }
    return out;
}

NoiseField piecewise_linearize(const NoiseField& xi_eps, double theta) {
    const Lattice& lat = xi_eps.f.lat;
    double md = theta / lat.dt;
    long long m = llround(md);
    if (m < 1 || std::fabs(md - double(m)) > 1e-9)
        throw std::invalid_argument("piecewise_linearize: theta must be a multiple of dt");
    size_t nc = lat.ncells();

    // complete blocks inside the window
    long long ja = xi_eps.f.j0, jb = xi_eps.f.j0 + xi_eps.f.nt;  // [ja, jb)
    long long kfirst = (long long)std::floor(double(ja) / double(m)) - 1;
    while (kfirst * m < ja) ++kfirst;
    long long klast = (long long)std::floor(double(jb) / double(m)) + 1;
    while (klast * m > jb) --klast;
    if (klast <= kfirst)
        throw std::invalid_argument("piecewise_linearize: window holds no complete block");

    NoiseField out;
    out.f = GridField(lat, kfirst * m, int((klast - kfirst) * m));
    out.seed = xi_eps.seed;
    out.stage = NoiseStage::wz;
    out.eps = xi_eps.eps;
    out.theta = theta;
    std::vector<double> avg(nc);
    for (long long k = kfirst; k < klast; ++k) {
        std::fill(avg.begin(), avg.end(), 0.0);
        for (long long jj = k * m; jj < (k + 1) * m; ++jj) {
            const double* s = xi_eps.f.slice_abs(jj);
            for (size_t c = 0; c < nc; ++c) avg[c] += s[c];
        }
        for (size_t c = 0; c < nc; ++c) avg[c] /= double(m);
        for (long long jj = k * m; jj < (k + 1) * m; ++jj) {
            double* o = out.f.slice(int(jj - out.f.j0));
            for (size_t c = 0; c < nc; ++c) o[c] = avg[c];
        }
    }
    return out;
}

NoiseField regularize(const NoiseField& white, double eps, double theta) {
    Mollifier moll = build_mollifier(white.f.lat, eps);
    NoiseField m = mollify(white, moll);
    NoiseField out = piecewise_linearize(m, theta);
    if (eps * eps > theta + 1e-12) {
        // standing assumption eps^2 <= C0 theta with C0 = 1; callers may
        // explore beyond it, so this is a warning, not an error
        std::fprintf(stderr, "[wz] warning: eps^2 = %g exceeds theta = %g\n", eps * eps,
                     theta);
    }
    return out;
}

std::vector<NoiseField> couple_resolutions(
    const Lattice& lat, long long j0, int nt, uint64_t master_seed,
    const std::vector<std::pair<double, double>>& ladder) {
    NoiseField master = sample_white(lat, j0, nt, master_seed);
    std::vector<NoiseField> out;
    out.reserve(ladder.size());
    for (const auto& [eps, theta] : ladder) out.push_back(regularize(master, eps, theta));
    return out;
}

}  // namespace wz
