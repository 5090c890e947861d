#include "wz/wzcov.hpp"

#include <cmath>
#include <stdexcept>

namespace wz {

WzCov::WzCov(const KernelTable& K, double eps, double theta)
    : K_(K), moll_(build_mollifier(K.lat, eps)) {
    dt_ = K.lat.dt;
    nsl_ = K.nsl;
    nc_ = K.lat.ncells();
    double md = theta / dt_;
    m_ = llround(md);
    if (m_ < 1 || std::fabs(md - double(m_)) > 1e-9)
        throw std::invalid_argument("WzCov: theta must be a positive multiple of dt");
    if (eps * eps > theta + 1e-12)
        std::fprintf(stderr, "[wz] warning: eps^2 = %g exceeds theta = %g\n", eps * eps,
                     theta);

    // cumulative kernel transform over time slices
    const auto& hat = K.hat();
    cumhat_.assign(size_t(nsl_) * nc_, 0.0);
    for (int s = 1; s < nsl_; ++s) {
        const double* prev = cumhat_.data() + size_t(s - 1) * nc_;
        const double* h = hat.data() + size_t(s) * nc_;
        double* cur = cumhat_.data() + size_t(s) * nc_;
        for (size_t c = 0; c < nc_; ++c) cur[c] = prev[c] + h[c];
    }

    // rbase(delta) = (dt/m) sum_{j2=0}^{m-1} wt(j2 - delta)
    rb_lo_ = -moll_.jt_rad;
    long long rb_hi = m_ - 1 + moll_.jt_rad;
    rbase_.assign(size_t(rb_hi - rb_lo_ + 1), 0.0);
    for (long long delta = rb_lo_; delta <= rb_hi; ++delta) {
        double acc = 0;
        for (long long j2 = 0; j2 < m_; ++j2) acc += moll_.wt(j2 - delta);
        rbase_[size_t(delta - rb_lo_)] = acc * dt_ / double(m_);
    }

    // BBrel(dk) = sum_delta rbase(delta) rbase(delta + dk m)
    bb_rad_ = (2 * moll_.jt_rad) / m_ + 1;
    bbrel_.assign(size_t(2 * bb_rad_ + 1), 0.0);
    for (long long dk = -bb_rad_; dk <= bb_rad_; ++dk) {
        double acc = 0;
        for (long long i = 0; i < (long long)rbase_.size(); ++i) {
            long long delta = rb_lo_ + i;
            acc += rbase_[size_t(i)] * rbase(delta + dk * m_);
        }
        bbrel_[size_t(dk + bb_rad_)] = acc;
    }
}

std::pair<long long, long long> WzCov::block_range(long long j) const {
    // blocks holding steps j1 with 1 <= j - j1 <= nsl_ - 1
    long long j1_lo = j - (nsl_ - 1), j1_hi = j - 1;
    auto fdiv = [](long long a, long long b) {
        long long q = a / b;
        if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
        return q;
    };
    return {fdiv(j1_lo, m_), fdiv(j1_hi, m_)};
}

bool WzCov::block_hat(long long j, long long k, std::vector<double>& out) const {
    long long s_lo = j - ((k + 1) * m_ - 1), s_hi = j - k * m_;
    if (s_lo < 1) s_lo = 1;
    if (s_hi > nsl_ - 1) s_hi = nsl_ - 1;
    if (s_hi < s_lo) return false;
    const double* hi = cumhat_.data() + size_t(s_hi) * nc_;
    const double* lo = cumhat_.data() + size_t(s_lo - 1) * nc_;
    for (size_t c = 0; c < nc_; ++c) out[c] = dt_ * (hi[c] - lo[c]);
    return true;
}

std::vector<double> WzCov::f_hat(long long j, long long jbar) const {
    auto [ka, kb] = block_range(j);
    auto [kc, kd] = block_range(jbar);
    std::vector<double> out(nc_, 0.0);
    std::vector<double> kbj(nc_), kbjbar(nc_);
    for (long long k = ka; k <= kb; ++k) {
        if (!block_hat(j, k, kbj)) continue;
        for (long long kp = std::max(kc, k - bb_rad_); kp <= std::min(kd, k + bb_rad_);
             ++kp) {
            double w = bbrel(k - kp);
            if (w == 0.0) continue;
            if (!block_hat(jbar, kp, kbjbar)) continue;
            for (size_t c = 0; c < nc_; ++c) out[c] += w * kbj[c] * kbjbar[c];
        }
    }
    const auto& r2h = moll_.rho2_hat;
    for (size_t c = 0; c < nc_; ++c) {
        double r = r2h[c].real();
        out[c] *= r * r / dt_;
    }
    return out;
}

std::vector<double> WzCov::f_field(long long j, long long jbar) const {
    std::vector<double> fh = f_hat(j, jbar);
    std::vector<cplx> spec(nc_);
    for (size_t c = 0; c < nc_; ++c) spec[c] = fh[c];
    std::vector<double> out(nc_);
    spatial_ifft(std::move(spec), K_.lat.d, K_.lat.n, out.data());
    return out;
}

double WzCov::f_point(long long j, long long jbar, size_t dy_cell) const {
    return f_field(j, jbar)[dy_cell];
}

double WzCov::C1(long long j) const {
    std::vector<double> fh = f_hat(j, j);
    double acc = 0;
    for (size_t c = 0; c < nc_; ++c) acc += fh[c];
    return acc;
}

double WzCov::C2(long long j) const {
    double acc = 0;
    double dxd = 1;
    for (int i = 0; i < K_.lat.d; ++i) dxd *= K_.lat.dx();
    for (int s = 1; s < nsl_; ++s) {
        long long jbar = j - s;
        std::vector<double> f = f_field(j, jbar);
        const double* ks = K_.slice(s);
        double inner = 0;
        for (size_t c = 0; c < nc_; ++c) inner += f[c] * f[c] * ks[c];
        acc += inner;
    }
    return 2.0 * acc * dt_ * dxd;
}

std::vector<double> WzCov::kernel_field(long long j, long long j3) const {
    auto [ka, kb] = block_range(j);
    std::vector<double> acc(nc_, 0.0), kbj(nc_);
    for (long long k = ka; k <= kb; ++k) {
        double w = rbase(j3 - k * m_);
        if (w == 0.0) continue;
        if (!block_hat(j, k, kbj)) continue;
        for (size_t c = 0; c < nc_; ++c) acc[c] += w * kbj[c];
    }
    const auto& r2h = moll_.rho2_hat;
    std::vector<cplx> spec(nc_);
    for (size_t c = 0; c < nc_; ++c) spec[c] = acc[c] * r2h[c].real() / dt_;
    std::vector<double> out(nc_);
    spatial_ifft(std::move(spec), K_.lat.d, K_.lat.n, out.data());
    return out;
}

double WzCov::kernel_mass(long long j) const {
    // mass = sum_{j3} kappa^(j, j3, q=0): rho2^(0) = 1 by normalization and
    // sum_{j3} rbase(j3 - k m) = dt for every block k
    auto [ka, kb] = block_range(j);
    std::vector<double> kbj(nc_);
    double acc = 0;
    for (long long k = ka; k <= kb; ++k) {
        if (!block_hat(j, k, kbj)) continue;
        acc += kbj[0];
    }
    return acc;
}

std::vector<double> WzCov::kk_field(long long j, long long jbar) const {
    const auto& hat = K_.hat();
    std::vector<double> acc(nc_, 0.0);
    for (int s = 1; s < nsl_; ++s) {
        long long j1 = j - s;          // K(z - z1) slice s
        long long sb = jbar - j1;      // K(zbar - z1) slice
        if (sb < 1 || sb >= nsl_) continue;
        const double* h1 = hat.data() + size_t(s) * nc_;
        const double* h2 = hat.data() + size_t(sb) * nc_;
        for (size_t c = 0; c < nc_; ++c) acc[c] += h1[c] * h2[c];
    }
    std::vector<cplx> spec(nc_);
    for (size_t c = 0; c < nc_; ++c) spec[c] = acc[c] * dt_;
    std::vector<double> out(nc_);
    spatial_ifft(std::move(spec), K_.lat.d, K_.lat.n, out.data());
    return out;
}

std::pair<long long, long long> WzCov::noise_slot_range(long long j) const {
    auto [ka, kb] = block_range(j);
    return {ka * m_ + rb_lo_, (kb + 1) * m_ - 1 + moll_.jt_rad};
}

}  // namespace wz
