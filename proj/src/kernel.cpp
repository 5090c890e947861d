#include "wz/kernel.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "wz/mollifier.hpp"

namespace wz {

void KernelSpec::validate() const {
    lat.validate();
    if (r < 2) throw std::invalid_argument("KernelSpec: r >= 2 required");
    if (n_images < 1) throw std::invalid_argument("KernelSpec: n_images >= 1");
    if (!(support_radius > 0) || support_radius > 1.0)
        throw std::invalid_argument("KernelSpec: support_radius in (0, 1]");
    if (support_radius * support_radius < 24 * lat.dt)
        throw std::invalid_argument("KernelSpec: support under-resolved in time");
}

double smoothstep_cinf(double s) {
    auto f = [](double u) { return u > 0 ? std::exp(-1.0 / u) : 0.0; };
    if (s <= 0) return 1.0;
    if (s >= 1) return 0.0;
    return f(1 - s) / (f(s) + f(1 - s));
}

namespace {

double heat1d_periodized(double t, double x, int n_images) {
    double pre = 1.0 / std::sqrt(4.0 * M_PI * t);
    double acc = 0;
    for (int m = -n_images; m <= n_images; ++m) {
        double y = x + double(m);
        acc += std::exp(-y * y / (4.0 * t));
    }
    return pre * acc;
}

}  // namespace

double heat_kernel(double t, const double* x, int d, int n_images) {
    if (t <= 0) return 0.0;
    double v = 1.0;
    for (int i = 0; i < d; ++i) v *= heat1d_periodized(t, x[i], n_images);
    return v;
}

double monomial_weight(const Lattice& lat, int ix, int p) {
    if (p == 0) return 1.0;
    if (ix == lat.n / 2) {
        // seam cell: average the two aliased representatives +-1/2
        double a = std::pow(-0.5, p), b = std::pow(0.5, p);
        return 0.5 * (a + b);
    }
    return std::pow(torus_coord(lat, ix), p);
}

namespace {

struct Monomial {
    int pt = 0;                 // power of t
    std::array<int, 3> px{0, 0, 0};
    int sdeg() const { return 2 * pt + px[0] + px[1] + px[2]; }
    std::string name() const {
        std::string s = "1";
        auto app = [&](const std::string& v, int p) {
            if (p == 0) return;
            if (s == "1") s.clear(); else s += "*";
            s += v;
            if (p > 1) s += "^" + std::to_string(p);
        };
        app("t", pt);
        app("x1", px[0]);
        app("x2", px[1]);
        app("x3", px[2]);
        return s;
    }
};

std::vector<Monomial> monomials_up_to(int r, int d) {
    std::vector<Monomial> out;
    for (int pt = 0; 2 * pt <= r; ++pt)
        for (int p1 = 0; 2 * pt + p1 <= r && (d >= 1 || p1 == 0); ++p1)
            for (int p2 = 0; 2 * pt + p1 + p2 <= r && (d >= 2 || p2 == 0); ++p2)
                for (int p3 = 0; 2 * pt + p1 + p2 + p3 <= r && (d >= 3 || p3 == 0); ++p3)
                    out.push_back(Monomial{pt, {p1, p2, p3}});
    return out;
}

double table_moment(const Lattice& lat, const std::vector<double>& val, int nsl,
                    const Monomial& mo) {
    size_t nc = lat.ncells();
    double dv = lat.cell_volume();
    int ix[3];
    double acc = 0;
    for (int j = 1; j < nsl; ++j) {
        double t = j * lat.dt;
        double wt = std::pow(t, mo.pt);
        const double* s = val.data() + size_t(j) * nc;
        for (size_t c = 0; c < nc; ++c) {
            if (s[c] == 0.0) continue;
            spatial_coords(lat, c, ix);
            double w = wt;
            for (int i = 0; i < lat.d; ++i) w *= monomial_weight(lat, ix[i], mo.px[i]);
            acc += s[c] * w;
        }
    }
    return acc * dv;
}

// solve the least-norm solution of A c = b for a short fat row-independent A
std::vector<double> solve_least_norm(const std::vector<std::vector<double>>& A,
                                     const std::vector<double>& b) {
    size_t m = A.size(), n = A[0].size();
    // G = A A^T (m x m)
    std::vector<std::vector<double>> G(m, std::vector<double>(m, 0.0));
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j)
            for (size_t k = 0; k < n; ++k) G[i][j] += A[i][k] * A[j][k];
    // gauss solve G y = b with partial pivoting
    std::vector<double> y = b;
    std::vector<std::vector<double>> M = G;
    double gmax = 0;
    for (const auto& row : G)
        for (double x : row) gmax = std::max(gmax, std::fabs(x));
    for (size_t col = 0; col < m; ++col) {
        size_t piv = col;
        for (size_t rr = col + 1; rr < m; ++rr)
            if (std::fabs(M[rr][col]) > std::fabs(M[piv][col])) piv = rr;
        if (std::fabs(M[piv][col]) < 1e-13 * gmax)
            throw std::runtime_error(
                "build_K: moment-correction solve singular (bad cutoff or grid)");
        std::swap(M[piv], M[col]);
        std::swap(y[piv], y[col]);
        for (size_t rr = col + 1; rr < m; ++rr) {
            double f = M[rr][col] / M[col][col];
            for (size_t cc = col; cc < m; ++cc) M[rr][cc] -= f * M[col][cc];
            y[rr] -= f * y[col];
        }
    }
    for (size_t col = m; col-- > 0;) {
        for (size_t cc = col + 1; cc < m; ++cc) y[col] -= M[col][cc] * y[cc];
        y[col] /= M[col][col];
    }
    std::vector<double> c(n, 0.0);
    for (size_t k = 0; k < n; ++k)
        for (size_t i = 0; i < m; ++i) c[k] += A[i][k] * y[i];
    return c;
}

}  // namespace

KernelTable build_K(const KernelSpec& spec) {
    spec.validate();
    const Lattice& lat = spec.lat;
    const double R2 = spec.support_radius * spec.support_radius;
    KernelTable K;
    K.lat = lat;
    K.support_radius = spec.support_radius;
    K.nsl = int(std::ceil(R2 / lat.dt));
    size_t nc = lat.ncells();
    K.val.assign(size_t(K.nsl) * nc, 0.0);

    // precompute torus r^2 per cell
    std::vector<double> r2(nc);
    for (size_t c = 0; c < nc; ++c) r2[c] = torus_r2(lat, c);

    // chi * G_per
    std::vector<double> g1(size_t(lat.d) * lat.n);
    for (int j = 1; j < K.nsl; ++j) {
        double t = j * lat.dt;
        for (int i = 0; i < lat.d; ++i)
            for (int p = 0; p < lat.n; ++p)
                g1[size_t(i) * lat.n + p] =
                    heat1d_periodized(t, torus_coord(lat, p), spec.n_images);
        double* s = K.slice(j);
        int ix[3];
        for (size_t c = 0; c < nc; ++c) {
            double q = r2[c] + t;
            if (q >= R2) continue;
            double chi = smoothstep_cinf((q - R2 / 2) / (R2 / 2));
            if (chi == 0.0) continue;
            spatial_coords(lat, c, ix);
            double g = 1;
            for (int i = 0; i < lat.d; ++i) g *= g1[size_t(i) * lat.n + ix[i]];
            s[c] = chi * g;
        }
    }

    // Correction basis spread over the whole outer annulus so the solved
    // coefficients stay O(1): a smooth shell profile psi(q) supported in
    // q/R^2 in (0.535, 0.965), switched on smoothly away from t = 0, times
    // the even monomials {1, t, |x|^2}. Radial and even, so odd moments
    // vanish identically and only three constraints need solving.
    auto shell = [&](double t, double rr2) {
        double u = (t + rr2) / R2;
        double psi = bump(2.0 * (u - 0.75) / 0.43);
        // vanish to all orders at the causal boundary t = 0
        return psi * (1.0 - smoothstep_cinf(t / (0.2 * R2)));
    };
    const int n_basis = 3;
    auto bump_val = [&](int b, double t, double rr2) {
        double base = shell(t, rr2);
        if (b == 1) return base * (t / R2);
        if (b == 2) return base * (rr2 / R2);
        return base;
    };

    // constraints: total moment of K for monomials {1, t, x1^2}; the other
    // x_i^2 rows coincide with the x1^2 one by the cubic symmetry of the
    // construction (radial bumps, permutation-symmetric G_per and chi)
    std::vector<Monomial> cons = {Monomial{0, {0, 0, 0}}, Monomial{1, {0, 0, 0}}};
    {
        Monomial mo;
        mo.px[0] = 2;
        cons.push_back(mo);
    }

    std::vector<std::vector<double>> A(cons.size(), std::vector<double>(size_t(n_basis), 0.0));
    std::vector<double> b(cons.size(), 0.0);
    for (size_t ci = 0; ci < cons.size(); ++ci)
        b[ci] = -table_moment(lat, K.val, K.nsl, cons[ci]);

    double dv = lat.cell_volume();
    for (int bi = 0; bi < n_basis; ++bi) {
        for (int j = 1; j < K.nsl; ++j) {
            double t = j * lat.dt;
            for (size_t c = 0; c < nc; ++c) {
                double w = bump_val(bi, t, r2[c]);
                if (w == 0.0) continue;
                int ix[3];
                spatial_coords(lat, c, ix);
                for (size_t ci = 0; ci < cons.size(); ++ci) {
                    double mw = std::pow(t, cons[ci].pt);
                    for (int i = 0; i < lat.d; ++i)
                        mw *= monomial_weight(lat, ix[i], cons[ci].px[i]);
                    A[ci][size_t(bi)] += w * mw * dv;
                }
            }
        }
    }

    std::vector<double> coef = solve_least_norm(A, b);

    for (int j = 1; j < K.nsl; ++j) {
        double t = j * lat.dt;
        double* s = K.slice(j);
        for (size_t c = 0; c < nc; ++c) {
            double add = 0;
            for (int bi = 0; bi < n_basis; ++bi)
                add += coef[size_t(bi)] * bump_val(bi, t, r2[c]);
            s[c] += add;
        }
    }

    // record achieved moments and |K| mass
    K.abs_mass = 0;
    for (double x : K.val) K.abs_mass += std::fabs(x);
    K.abs_mass *= dv;
    for (const auto& mo : monomials_up_to(spec.r, lat.d))
        K.moments[mo.name()] = table_moment(lat, K.val, K.nsl, mo);
    return K;
}

const std::vector<double>& KernelTable::hat() const {
    if (hat_.empty()) {
        size_t nc = lat.ncells();
        hat_.assign(size_t(nsl) * nc, 0.0);
        for (int j = 1; j < nsl; ++j) {
            auto spec = spatial_fft(slice(j), lat.d, lat.n);
            double* out = hat_.data() + size_t(j) * nc;
            for (size_t c = 0; c < nc; ++c) out[c] = spec[c].real();
        }
    }
    return hat_;
}

const std::vector<double>& KernelTable::deriv(int axis) const {
    auto& dv = deriv_[axis];
    if (dv.empty()) {
        size_t nc = lat.ncells();
        dv.assign(size_t(nsl) * nc, 0.0);
        int stride = 1;
        for (int i = lat.d - 1; i > axis; --i) stride *= lat.n;
        double inv12dx = 1.0 / (12.0 * lat.dx());
        int ix[3];
        for (int j = 1; j < nsl; ++j) {
            const double* s = slice(j);
            double* out = dv.data() + size_t(j) * nc;
            for (size_t c = 0; c < nc; ++c) {
                spatial_coords(lat, c, ix);
                int p = ix[axis];
                auto wrap = [&](int q) {
                    int w = ((q % lat.n) + lat.n) % lat.n;
                    return s[(long long)c + (long long)(w - p) * stride];
                };
                out[c] = (wrap(p - 2) - 8 * wrap(p - 1) + 8 * wrap(p + 1) - wrap(p + 2)) *
                         inv12dx;
            }
        }
    }
    return dv;
}

double kernel_base_radius(const KernelTable& K) {
    double r = 0;
    size_t nc = K.lat.ncells();
    for (int j = 1; j < K.nsl; ++j) {
        const double* s = K.slice(j);
        for (size_t c = 0; c < nc; ++c)
            if (s[c] != 0.0) r = std::max(r, parabolic_norm(K.lat, j * K.lat.dt, c));
    }
    return r;
}

std::vector<KernelTable> dyadic_decompose(const KernelTable& K, int n_dyadic) {
    if (n_dyadic < 1) throw std::invalid_argument("dyadic_decompose: n_dyadic >= 1");
    const Lattice& lat = K.lat;
    double R0 = kernel_base_radius(K) * (1.0 + 1e-12);
    // smallest annulus must stay grid-resolved
    double rmin = R0 / std::pow(2.0, n_dyadic);
    if (rmin < 4 * lat.dx())
        throw std::invalid_argument("dyadic_decompose: n_dyadic exceeds grid resolution");

    std::vector<KernelTable> parts(size_t(n_dyadic) + 1);
    for (auto& p : parts) {
        p.lat = lat;
        p.support_radius = K.support_radius;
        p.nsl = K.nsl;
        p.val.assign(K.val.size(), 0.0);
    }
    size_t nc = lat.ncells();
    // weights: w_0 = 1 - theta(2 rho), w_m = theta(2^m rho) - theta(2^{m+1} rho),
    // w_n = theta(2^n rho); theta(u) smooth, 1 for u <= 1/2, 0 for u >= 1.
    auto theta = [&](double u) { return smoothstep_cinf(2.0 * u - 1.0); };
    for (int j = 1; j < K.nsl; ++j) {
        const double* s = K.slice(j);
        for (size_t c = 0; c < nc; ++c) {
            if (s[c] == 0.0) continue;
            double rho = parabolic_norm(lat, j * lat.dt, c) / R0;
            for (int m = 0; m <= n_dyadic; ++m) {
                double w;
                if (m == 0)
                    w = 1.0 - theta(2.0 * rho);
                else if (m < n_dyadic)
                    w = theta(std::pow(2.0, m) * rho) - theta(std::pow(2.0, m + 1) * rho);
                else
                    w = theta(std::pow(2.0, n_dyadic) * rho);
                if (w != 0.0) parts[size_t(m)].val[size_t(j) * nc + c] = s[c] * w;
            }
        }
    }
    return parts;
}

void KernelTable::save(const std::string& path) const {
    GridField f(lat, 0, nsl);
    f.v = val;
    save_field(f, path);
}

}  // namespace wz
