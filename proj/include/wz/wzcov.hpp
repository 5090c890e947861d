#pragma once

#include "wz/kernel.hpp"
#include "wz/mollifier.hpp"

namespace wz {

/// Covariance machinery of the regularised kernel
///   K_{eps,theta}(z, z1) : the heat-kernel truncation K composed with the
///   block time-average and the mollifier in the noise slot.
/// Everything is expressed through the block structure: with blocks of
/// m = theta/dt steps aligned to absolute time zero,
///   kappa^(j, j3, q) = rho2^(q) * sum_k KB_j(k, q) rbase(j3 - k m),
/// where KB_j(k, q) sums the kernel transform over the block's time slices
/// and rbase is the block-averaged mollifier time profile. The covariance
///   f^{(eps,theta)}(z, zbar) = int K_{eps,theta}(z, .) K_{eps,theta}(zbar, .)
/// and the counterterm integrands reduce to banded block sums of these.
class WzCov {
  public:
    WzCov(const KernelTable& K, double eps, double theta);

    const Mollifier& mollifier() const { return moll_; }
    long long block_steps() const { return m_; }
    double eps() const { return moll_.eps; }
    double theta() const { return double(m_) * K_.lat.dt; }
    const KernelTable& kernel() const { return K_; }

    /// spectral covariance f^ between output times j and jbar (absolute steps)
    std::vector<double> f_hat(long long j, long long jbar) const;
    /// f(z, zbar) as a spatial field over y - ybar
    std::vector<double> f_field(long long j, long long jbar) const;
    /// f at a single pair (cell indexes the offset y - ybar)
    double f_point(long long j, long long jbar, size_t dy_cell) const;

    /// C1(t_j) = int K_{eps,theta}(z, z1)^2 dz1  (via the spectral route)
    double C1(long long j) const;
    /// C2(t_j) = 2 int f(z, z1)^2 K(z - z1) dz1
    double C2(long long j) const;

    /// K_{eps,theta}((j,y),(j3,y3)) as a spatial field over y - y3
    std::vector<double> kernel_field(long long j, long long j3) const;
    /// int K_{eps,theta}(z, z1) dz1 (mass transported to the noise slot)
    double kernel_mass(long long j) const;

    /// continuum comparison kernel: (K * K)(z - zbar) as a field over y - ybar
    std::vector<double> kk_field(long long j, long long jbar) const;

    /// range of j3 with kappa(j, j3, .) != 0
    std::pair<long long, long long> noise_slot_range(long long j) const;

  private:
    const KernelTable& K_;
    Mollifier moll_;
    long long m_;
    int nsl_;
    size_t nc_;
    double dt_;
    std::vector<double> cumhat_;  // cumulative kernel transform over slices
    std::vector<double> rbase_;   // block-averaged mollifier, offset rb_lo_
    long long rb_lo_ = 0;
    std::vector<double> bbrel_;   // BBrel(dk), |dk| <= bb_rad_
    long long bb_rad_ = 0;

    // block range [k_lo, k_hi] contributing to output step j
    std::pair<long long, long long> block_range(long long j) const;
    // KB^_j(k, q) into out (adds dt * (cum[s_hi] - cum[s_lo-1]))
    bool block_hat(long long j, long long k, std::vector<double>& out) const;
    double rbase(long long delta) const {
        long long i = delta - rb_lo_;
        if (i < 0 || i >= (long long)rbase_.size()) return 0.0;
        return rbase_[size_t(i)];
    }
    double bbrel(long long dk) const {
        if (dk < -bb_rad_ || dk > bb_rad_) return 0.0;
        return bbrel_[size_t(dk + bb_rad_)];
    }
};

}  // namespace wz
