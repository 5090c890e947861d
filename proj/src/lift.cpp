#include "wz/lift.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "wz/mollifier.hpp"
#include "wz/renorm.hpp"
#include "wz/rng.hpp"

namespace wz {

using sym::Kind;
using sym::Tree;

Lift::Lift(const KernelTable& K, const NoiseField& xi, const sym::AlgebraConfig& acfg,
           const CountertermTable* counter)
    : K_(K), xi_(xi), acfg_(acfg), ct_(counter) {
    if (!(K.lat == xi.f.lat)) throw std::invalid_argument("Lift: lattice mismatch");
    if (xi.stage != NoiseStage::wz)
        throw std::invalid_argument("Lift: noise must be at the wz stage");
    acfg_.d = K.lat.d;
}

namespace {

std::string cache_key(const Tree& t, long long jx, size_t cx, long long j_lo,
                      long long j_hi, bool xdep) {
    std::ostringstream os;
    os << t.str() << "|" << j_lo << "|" << j_hi;
    if (xdep) os << "|x" << jx << "," << cx;
    return os.str();
}

// does the lift of this tree depend on the base point?
bool x_dependent(const Tree& t) {
    switch (t.kind()) {
        case Kind::One:
        case Kind::Noise:
        case Kind::CSym: return false;
        case Kind::Poly: return true;
        case Kind::Prod: {
            for (const auto& f : t.factors())
                if (x_dependent(f)) return true;
            return false;
        }
        case Kind::Int: return true;  // recentering may subtract values at x
    }
    return true;
}

}  // namespace

GridField Lift::convolve_K(const MIdx& l, const GridField& inner, long long j_lo,
                           long long j_hi) {
    const Lattice& lat = K_.lat;
    size_t nc = lat.ncells();
    if (l.k[0] != 0 || l.sdeg() > 1)
        throw std::invalid_argument("Lift: only spatial first-derivative kernels are tabulated");
    const double* tab =
        (l.sdeg() == 0) ? K_.hat().data() : nullptr;
    // derivative slices are tabulated in real space; transform on the fly
    std::vector<std::vector<double>> dhat;
    if (!tab) {
        int axis = 0;
        for (int i = 0; i < lat.d; ++i)
            if (l.k[i + 1] == 1) axis = i;
        dhat.resize(size_t(K_.nsl));
        for (int s = 1; s < K_.nsl; ++s) {
            auto spec = spatial_fft(K_.deriv_slice(axis, s), lat.d, lat.n);
            dhat[size_t(s)].resize(nc);
            for (size_t c = 0; c < nc; ++c) dhat[size_t(s)][c] = spec[c].real();
        }
    }

    // spectral slices of the inner field
    long long in_lo = inner.j0, in_hi = inner.j0 + inner.nt;
    std::vector<std::vector<cplx>> ihat(size_t(inner.nt));
    for (int j = 0; j < inner.nt; ++j)
        ihat[size_t(j)] = spatial_fft(inner.slice(j), lat.d, lat.n);

    GridField out(lat, j_lo, int(j_hi - j_lo));
    std::vector<cplx> acc(nc);
    for (long long j = j_lo; j < j_hi; ++j) {
        std::fill(acc.begin(), acc.end(), cplx(0, 0));
        for (int s = 1; s < K_.nsl; ++s) {
            long long j1 = j - s;
            if (j1 < in_lo || j1 >= in_hi) {
                if (j1 < in_lo) {
                    throw std::out_of_range(
                        "Lift: inner field window too short for the kernel support");
                }
                continue;
            }
            const double* kh = tab ? (tab + size_t(s) * nc) : dhat[size_t(s)].data();
            const auto& ih = ihat[size_t(j1 - in_lo)];
            for (size_t c = 0; c < nc; ++c) acc[c] += lat.dt * kh[c] * ih[c];
        }
        spatial_ifft(acc, lat.d, lat.n, out.slice(int(j - j_lo)));
    }
    return out;
}

double Lift::conv_at(const MIdx& l, const GridField& inner, long long j, size_t cell) {
    GridField g = convolve_K(l, inner, j, j + 1);
    return g.at(0, cell);
}

GridField Lift::eval(const Tree& tau, long long jx, size_t cx, long long j_lo,
                     long long j_hi) {
    const Lattice& lat = K_.lat;
    size_t nc = lat.ncells();
    GridField out(lat, j_lo, int(j_hi - j_lo));
    switch (tau.kind()) {
        case Kind::One: {
            std::fill(out.v.begin(), out.v.end(), 1.0);
            return out;
        }
        case Kind::Noise: {
            for (int j = 0; j < out.nt; ++j) {
                long long ja = j_lo + j;
                if (!xi_.f.has_abs(ja))
                    throw std::out_of_range("Lift: noise window does not cover the lift window");
                const double* s = xi_.f.slice_abs(ja);
                std::copy(s, s + nc, out.slice(j));
            }
            return out;
        }
        case Kind::CSym: {
            if (!ct_) throw std::invalid_argument("Lift: C-symbol lift needs counterterms");
            for (int j = 0; j < out.nt; ++j) {
                long long ja = j_lo + j;
                double v = (tau.csym_index() == 1) ? ct_->c1_at_step(ja) : 0.0;
                if (tau.csym_index() == 2) {
                    // C2 sampled on the same table
                    long long r = ((ja % ct_->m) + ct_->m) % ct_->m;
                    // nearest sample (C2 varies little within a block)
                    size_t best = 0;
                    long long bd = ct_->m;
                    for (size_t i = 0; i < ct_->j_off.size(); ++i) {
                        long long d0 = std::llabs(r - ct_->j_off[i]);
                        d0 = std::min(d0, ct_->m - d0);
                        if (d0 < bd) { bd = d0; best = i; }
                    }
                    v = ct_->C2[best];
                }
                double* s = out.slice(j);
                std::fill(s, s + nc, v);
            }
            return out;
        }
        case Kind::Poly: {
            const MIdx& k = tau.midx();
            int ix[3];
            for (int j = 0; j < out.nt; ++j) {
                double dtt = double(j_lo + j - jx) * lat.dt;
                double wt = std::pow(dtt, k.k[0]);
                double* s = out.slice(j);
                int cxi[3];
                spatial_coords(lat, cx, cxi);
                for (size_t c = 0; c < nc; ++c) {
                    spatial_coords(lat, c, ix);
                    double w = wt;
                    for (int i = 0; i < lat.d; ++i) {
                        if (k.k[i + 1] == 0) continue;
                        int dq = ix[i] - cxi[i];
                        dq = ((dq % lat.n) + lat.n) % lat.n;
                        double dxv = torus_coord(lat, dq);
                        w *= std::pow(dxv, k.k[i + 1]);
                    }
                    s[c] = w;
                }
            }
            return out;
        }
        case Kind::Prod: {
            std::fill(out.v.begin(), out.v.end(), 1.0);
            for (const auto& f : tau.factors()) {
                GridField g = lift(f, LiftStage::canonical, jx, cx, j_lo, j_hi);
                for (size_t i = 0; i < out.v.size(); ++i) out.v[i] *= g.v[i];
            }
            return out;
        }
        case Kind::Int: {
            if (!tau.midx().is_zero())
                throw std::invalid_argument("Lift: only I (no derivatives) lifts to fields");
            const Tree& arg = tau.int_arg();
            GridField inner =
                lift(arg, LiftStage::canonical, jx, cx, j_lo - (K_.nsl - 1), j_hi);
            out = convolve_K(MIdx{}, inner, j_lo, j_hi);
            // recentering: subtract sum_l (z-x)^l / l! (D^l K * inner)(x)
            for (const auto& l : enumerate_midx(1, lat.d)) {
                sym::Hom h = arg.hom();
                h.c0 += 2 - l.sdeg();
                if (!(h.value(acfg_.alpha, acfg_.delta0).sign() > 0)) continue;
                double fx = conv_at(l, inner, jx, cx);
                if (l.is_zero()) {
                    for (double& v : out.v) v -= fx;
                } else {
                    int axis = 0;
                    for (int i = 0; i < lat.d; ++i)
                        if (l.k[i + 1] == 1) axis = i;
                    int ix[3], cxi[3];
                    spatial_coords(lat, cx, cxi);
                    for (int j = 0; j < out.nt; ++j) {
                        double* s = out.slice(j);
                        for (size_t c = 0; c < nc; ++c) {
                            spatial_coords(lat, c, ix);
                            int dq = ((ix[axis] - cxi[axis]) % lat.n + lat.n) % lat.n;
                            s[c] -= torus_coord(lat, dq) * fx;
                        }
                    }
                }
            }
            return out;
        }
    }
    throw std::logic_error("Lift::eval unreachable");
}

GridField Lift::lift(const Tree& tau, LiftStage stage, long long jx, size_t cx,
                     long long j_lo, long long j_hi) {
    if (stage == LiftStage::canonical) {
        bool xdep = x_dependent(tau);
        std::string key = "C|" + cache_key(tau, jx, cx, j_lo, j_hi, xdep);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        GridField g = eval(tau, jx, cx, j_lo, j_hi);
        cache_.emplace(key, g);
        return g;
    }
    // renormalised stage: (Pi_x (x) f_x) Delta^M tau
    const sym::TensorComb dm = sym::delta_M(tau, acfg_);
    GridField out(K_.lat, j_lo, int(j_hi - j_lo));
    for (const auto& [pair, coef] : dm.terms()) {
        double ch = f_x(pair.second, jx, cx, j_lo);
        if (ch == 0.0) continue;
        GridField g = lift(pair.first, LiftStage::canonical, jx, cx, j_lo, j_hi);
        double w = coef.to_double() * ch;
        for (size_t i = 0; i < out.v.size(); ++i) out.v[i] += w * g.v[i];
    }
    return out;
}

double Lift::f_x(const Tree& tau, long long jx, size_t cx, long long j_lo) {
    switch (tau.kind()) {
        case Kind::One: return 1.0;
        case Kind::Poly: {
            // f_x(X_i) = -x_i (and -t for the time coordinate)
            const MIdx& k = tau.midx();
            double v = 1.0;
            int cxi[3];
            spatial_coords(K_.lat, cx, cxi);
            if (k.k[0] != 0) v *= std::pow(-double(jx) * K_.lat.dt, k.k[0]);
            for (int i = 0; i < K_.lat.d; ++i)
                if (k.k[i + 1] != 0)
                    v *= std::pow(-torus_coord(K_.lat, cxi[i]), k.k[i + 1]);
            return v;
        }
        case Kind::Prod: {
            double v = 1.0;
            for (const auto& f : tau.factors()) v *= f_x(f, jx, cx, j_lo);
            return v;
        }
        case Kind::Int: {
            const MIdx& l = tau.midx();
            const Tree& arg = tau.int_arg();
            (void)j_lo;
            GridField inner = lift(arg, LiftStage::canonical, jx, cx,
                                   jx - (K_.nsl - 1), jx + 1);
            return -conv_at(l, inner, jx, cx);
        }
        default:
            throw std::invalid_argument("Lift::f_x: not a positive tree: " + tau.str());
    }
}

const GridField& Lift::convolved_noise(long long j_lo, long long j_hi) {
    lift(sym::tree_psi(), LiftStage::canonical, 0, 0, j_lo, j_hi);
    std::string key = "C|" + cache_key(sym::tree_psi(), 0, 0, j_lo, j_hi, false);
    return cache_.at(key);
}

double probe_bump(const double* u, int d) {
    // shifted product bump: nonvanishing mean and first moments so the
    // polynomial probes pair against it
    double w = 1.0;
    for (int i = 0; i < d + 1; ++i) w *= bump((u[i] - 0.35) * 2.2);
    return w;
}

namespace {

// instrument cell weight along one axis at scaled offset ubase (cell width
// ustep): 2x-per-axis subsampled bump values
double probe_axis_weight(double ubase, double ustep) {
    double u1 = ubase - 0.25 * ustep, u2 = ubase + 0.25 * ustep;
    return 0.5 * (bump((u1 - 0.35) * 2.2) + bump((u2 - 0.35) * 2.2));
}

}  // namespace

double pair_with_bump(const GridField& F, long long jx, size_t cx, double lambda) {
    const Lattice& lat = F.lat;
    double l2 = lambda * lambda;
    double norm = std::pow(lambda, -double(lat.d + 2));
    int cxi[3];
    spatial_coords(lat, cx, cxi);
    // support of the scaled bump: u in 0.35 +- 1/2.2 per axis
    double ulo = 0.35 - 1.0 / 2.2, uhi = 0.35 + 1.0 / 2.2;
    long long ja = (long long)std::floor((double(jx) * lat.dt + ulo * l2) / lat.dt);
    long long jb = (long long)std::ceil((double(jx) * lat.dt + uhi * l2) / lat.dt);
    int ra = (int)std::floor(ulo * lambda / lat.dx()) - 1;
    int rb = (int)std::ceil(uhi * lambda / lat.dx()) + 1;
    double acc = 0;
    int span = rb - ra + 1;
    std::vector<int> offs;
    offs.reserve(size_t(span));
    for (int i = 0; i < span; ++i) offs.push_back(ra + i);
    double dv = lat.cell_volume();
    // cell weights from 2x-per-axis subsampling of the bump (the field is
    // piecewise data; the test function is smooth, so averaging its values
    // inside each cell sharpens the quadrature)
    auto axis_weight = probe_axis_weight;
    double ut_step = lat.dt / l2;
    double ux_step = lat.dx() / lambda;
    for (long long j = ja; j <= jb; ++j) {
        if (j < F.j0 || j >= F.j0 + F.nt) continue;
        double w0 = axis_weight((double(j - jx) * lat.dt) / l2, ut_step);
        if (w0 == 0.0) continue;
        const double* s = F.slice(int(j - F.j0));
        int ix[3];
        std::function<void(int, double)> rec = [&](int axis, double w) {
            if (axis == lat.d) {
                size_t cell = 0;
                for (int i = 0; i < lat.d; ++i)
                    cell = cell * size_t(lat.n) + size_t(ix[i]);
                acc += w * s[cell];
                return;
            }
            for (int o : offs) {
                double wu = axis_weight((double(o) * lat.dx()) / lambda, ux_step);
                if (wu == 0.0) continue;
                ix[axis] = ((cxi[axis] + o) % lat.n + lat.n) % lat.n;
                rec(axis + 1, w * wu);
            }
        };
        rec(0, w0);
    }
    return acc * norm * dv;
}

double probe_expected_second_moment(const WzCov& cov, bool wick_square, double lambda) {
    const Lattice& lat = cov.kernel().lat;
    size_t nc = lat.ncells();
    double l2 = lambda * lambda;
    double norm = std::pow(lambda, -double(lat.d + 2));
    double dv = lat.cell_volume();
    double ut_step = lat.dt / l2;
    double ux_step = lat.dx() / lambda;
    // instrument weight slices around an arbitrary interior base step
    const long long jx = 256;
    double ulo = 0.35 - 1.0 / 2.2, uhi = 0.35 + 1.0 / 2.2;
    long long ja = (long long)std::floor(ulo * l2 / lat.dt) - 1;
    long long jb = (long long)std::ceil(uhi * l2 / lat.dt) + 1;
    int ra = (int)std::floor(ulo * lambda / lat.dx()) - 1;
    int rb = (int)std::ceil(uhi * lambda / lat.dx()) + 1;
    std::vector<long long> js;
    std::vector<std::vector<cplx>> phat;
    for (long long j = ja; j <= jb; ++j) {
        double w0 = probe_axis_weight(double(j) * lat.dt / l2, ut_step);
        if (w0 == 0.0) continue;
        std::vector<double> slice(nc, 0.0);
        // tensor weights over the spatial box around cell 0
        std::vector<double> wx(size_t(rb - ra + 1));
        for (int o = ra; o <= rb; ++o)
            wx[size_t(o - ra)] = probe_axis_weight(double(o) * lat.dx() / lambda, ux_step);
        int ix[3];
        std::function<void(int, double)> rec = [&](int axis, double w) {
            if (axis == lat.d) {
                size_t cell = 0;
                for (int i = 0; i < lat.d; ++i)
                    cell = cell * size_t(lat.n) + size_t(ix[i]);
                slice[cell] += w;
                return;
            }
            for (int o = ra; o <= rb; ++o) {
                double wu = wx[size_t(o - ra)];
                if (wu == 0.0) continue;
                ix[axis] = ((o % lat.n) + lat.n) % lat.n;
                rec(axis + 1, w * wu);
            }
        };
        rec(0, w0);
        for (auto& v : slice) v *= norm;
        phat.push_back(spatial_fft(slice.data(), lat.d, lat.n));
        js.push_back(jx + j);
    }
    double acc = 0;
    for (size_t a = 0; a < js.size(); ++a)
        for (size_t b = 0; b < js.size(); ++b) {
            double s = 0;
            if (!wick_square) {
                std::vector<double> fh = cov.f_hat(js[a], js[b]);
                for (size_t q = 0; q < nc; ++q)
                    s += fh[q] * (std::conj(phat[a][q]) * phat[b][q]).real();
            } else {
                std::vector<double> f = cov.f_field(js[a], js[b]);
                for (auto& v : f) v = 2.0 * v * v;
                auto f2h = spatial_fft(f.data(), lat.d, lat.n);
                for (size_t q = 0; q < nc; ++q)
                    s += f2h[q].real() * (std::conj(phat[a][q]) * phat[b][q]).real();
            }
            acc += s;
        }
    // the pairing carries one cell volume per slot; the spatial parts are
    // already inside the transforms (dx^d each), leaving dt^2
    return acc * (dv / std::pow(lat.dx(), lat.d)) * (dv / std::pow(lat.dx(), lat.d));
}

namespace {
long long ipow(long long b, int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}
}  // namespace

ProbeResult scaling_probe(const KernelTable& K, const sym::AlgebraConfig& acfg,
                          const Lattice& lat, double eps, double theta,
                          const std::vector<sym::Tree>& taus, LiftStage stage,
                          const std::vector<double>& lambdas, int n_mc, uint64_t seed0,
                          int n_base_points, const CountertermTable* counter) {
    for (double l : lambdas)
        if (l < 4 * lat.dx())
            throw std::invalid_argument("scaling_probe: lambda under-resolved");
    double lmax = 0;
    for (double l : lambdas) lmax = std::max(lmax, l);
    // output window holding every bump support (u0 in 0.35 +- 1/2.2, scaled)
    long long j_hi = (long long)std::ceil(lmax * lmax * 0.85 / lat.dt) + 2;
    long long j_lo = -(long long)std::ceil(lmax * lmax * 0.15 / lat.dt) - 2;
    long long depth = 1;  // probes integrate at most once
    long long noise_lo = j_lo - depth * (K.nsl + 1) -
                         (long long)(2 * llround(theta / lat.dt)) - 64;
    long long noise_hi = j_hi + (long long)(2 * llround(theta / lat.dt)) + 64;

    ProbeResult res;
    std::map<std::string, std::map<double, std::vector<double>>> samples;

    for (int mc = 0; mc < n_mc; ++mc) {
        NoiseField white =
            sample_white(lat, noise_lo, int(noise_hi - noise_lo), seed0 + uint64_t(mc));
        NoiseField xi = regularize(white, eps, theta);
        Lift lift(K, xi, acfg, counter);
        for (const auto& tau : taus) {
            for (double lam : lambdas) {
                double acc = 0;
                // base points on a coarse sublattice of the torus
                int per_axis = 1;
                while (ipow(per_axis + 1, lat.d) <= n_base_points) ++per_axis;
                int used = int(ipow(per_axis, lat.d));
                for (int bp = 0; bp < used; ++bp) {
                    long long jx = 0;
                    int ix[3] = {0, 0, 0};
                    int rem = bp;
                    for (int i = 0; i < lat.d; ++i) {
                        ix[i] = (rem % per_axis) * lat.n / per_axis;
                        rem /= per_axis;
                    }
                    size_t cx = spatial_index(lat, ix);
                    GridField F = lift.lift(tau, stage, jx, cx, j_lo, j_hi);
                    double p = pair_with_bump(F, jx, cx, lam);
                    acc += p * p;
                }
                samples[tau.str()][lam].push_back(acc / used);
            }
        }
    }

    for (auto& [tname, by_lam] : samples) {
        std::vector<double> xs, ys;
        for (auto& [lam, vals] : by_lam) {
            double mean = 0;
            for (double v : vals) mean += v;
            mean /= double(vals.size());
            double var = 0;
            for (double v : vals) var += (v - mean) * (v - mean);
            double se = vals.size() > 1 ? std::sqrt(var / (double(vals.size()) *
                                                           double(vals.size() - 1)))
                                        : 0.0;
            ProbeRow row;
            row.tau = tname;
            row.lambda = lam;
            row.stage = (stage == LiftStage::canonical) ? "canonical" : "renormalised";
            row.second_moment = mean;
            row.stderr_ = se;
            res.rows.push_back(row);
            xs.push_back(std::log(lam));
            ys.push_back(std::log(std::max(mean, 1e-300)));
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        size_t n = xs.size();
        for (size_t i = 0; i < n; ++i) {
            sx += xs[i]; sy += ys[i]; sxx += xs[i] * xs[i]; sxy += xs[i] * ys[i];
        }
        res.fitted_slope[tname] = (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
    }
    return res;
}

}  // namespace wz
