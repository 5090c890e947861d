#include "wz/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace wz {

namespace {

int signed_mode(int q, int n) { return q <= n / 2 ? q : q - n; }

std::vector<double> exp_factors(const Lattice& lat, double dt) {
    size_t nc = lat.ncells();
    std::vector<double> e(nc);
    int ix[3];
    for (size_t c = 0; c < nc; ++c) {
        spatial_coords(lat, c, ix);
        double k2 = 0;
        for (int i = 0; i < lat.d; ++i) {
            double ki = 2.0 * M_PI * signed_mode(ix[i], lat.n);
            k2 += ki * ki;
        }
        e[c] = std::exp(-k2 * dt);
    }
    return e;
}

std::vector<uint8_t> dealias_mask(const Lattice& lat) {
    size_t nc = lat.ncells();
    std::vector<uint8_t> m(nc, 1);
    int cutoff = lat.n / 3;
    int ix[3];
    for (size_t c = 0; c < nc; ++c) {
        spatial_coords(lat, c, ix);
        for (int i = 0; i < lat.d; ++i)
            if (std::abs(signed_mode(ix[i], lat.n)) > cutoff) m[c] = 0;
    }
    return m;
}

std::vector<cplx> to_spec(const Lattice& lat, const std::vector<double>& re) {
    std::vector<cplx> s(re.begin(), re.end());
    fft_nd(s.data(), lat.d, lat.n, false);
    return s;
}

std::vector<double> to_real(const Lattice& lat, std::vector<cplx> s) {
    fft_nd(s.data(), lat.d, lat.n, true);
    std::vector<double> re(s.size());
    for (size_t i = 0; i < s.size(); ++i) re[i] = s[i].real();
    return re;
}

}  // namespace

double laplacian_eigenvalue(const Lattice& lat, const int* q) {
    double k2 = 0;
    for (int i = 0; i < lat.d; ++i) {
        double ki = 2.0 * M_PI * q[i];
        k2 += ki * ki;
    }
    return -k2;
}

std::vector<double> SolverState::real_field() const {
    return to_real(lat, phi_hat);
}

double SolverState::max_abs() const {
    auto f = real_field();
    double m = 0;
    for (double x : f) m = std::max(m, std::fabs(x));
    return m;
}

SolverState make_state(const SolverConfig& cfg, const NoiseField* noise,
                       const CountertermTable* counter) {
    cfg.lat.validate();
    if (cfg.renorm && counter == nullptr)
        throw std::invalid_argument("make_state: renorm requested without counterterms");
    if (noise && !(noise->f.lat == cfg.lat))
        throw std::invalid_argument("make_state: noise lattice mismatch");
    SolverState st;
    st.lat = cfg.lat;
    st.j = 0;
    st.noise = noise;
    st.counter = counter;
    size_t nc = cfg.lat.ncells();
    std::vector<double> phi0(nc, 0.0);
    if (cfg.ic == "sin") {
        int ix[3];
        for (size_t c = 0; c < nc; ++c) {
            spatial_coords(cfg.lat, c, ix);
            phi0[c] = std::sin(2.0 * M_PI * double(ix[0]) * cfg.lat.dx());
        }
    } else if (cfg.ic == "zero") {
        // stays zero
    } else if (cfg.ic.rfind("constant:", 0) == 0) {
        double a = std::stod(cfg.ic.substr(9));
        std::fill(phi0.begin(), phi0.end(), a);
    } else {
        throw std::invalid_argument("make_state: unknown ic '" + cfg.ic + "'");
    }
    st.phi_hat = to_spec(cfg.lat, phi0);
    return st;
}

bool step(SolverState& st, const SolverConfig& cfg) {
    const Lattice& lat = st.lat;
    size_t nc = lat.ncells();
    static thread_local std::vector<double> efac;
    static thread_local std::vector<uint8_t> mask;
    static thread_local Lattice cached;
    static thread_local double cached_dt = 0;
    if (!(cached == lat) || cached_dt != lat.dt) {
        efac = exp_factors(lat, lat.dt);
        mask = dealias_mask(lat);
        cached = lat;
        cached_dt = lat.dt;
    }

    // reaction term in real space
    std::vector<double> phi = to_real(lat, st.phi_hat);
    double cap = cfg.blowup_cap;
    for (double x : phi)
        if (!(std::fabs(x) <= cap)) return false;

    double cval = 0;
    if (cfg.renorm && st.counter) cval = st.counter->c_at_step(st.j);
    std::vector<double> force(nc, 0.0);
    if (cfg.cube)
        for (size_t c = 0; c < nc; ++c) force[c] = -phi[c] * phi[c] * phi[c];
    if (cval != 0)
        for (size_t c = 0; c < nc; ++c) force[c] += cval * phi[c];
    if (st.noise) {
        if (!st.noise->f.has_abs(st.j))
            throw std::out_of_range("step: noise window does not cover step " +
                                    std::to_string(st.j));
        const double* xi = st.noise->f.slice_abs(st.j);
        for (size_t c = 0; c < nc; ++c) force[c] += xi[c];
    }

    std::vector<cplx> fhat = to_spec(lat, force);
    if (cfg.dealias && cfg.cube && lat.d >= 2)
        for (size_t c = 0; c < nc; ++c)
            if (!mask[c]) fhat[c] = 0;

    for (size_t c = 0; c < nc; ++c)
        st.phi_hat[c] = efac[c] * (st.phi_hat[c] + lat.dt * fhat[c]);
    st.j += 1;
    return true;
}

Trajectory run(const SolverConfig& cfg, const NoiseField* noise,
               const CountertermTable* counter, const std::vector<long long>& snap_steps) {
    SolverState st = make_state(cfg, noise, counter);
    Trajectory tr;
    long long n_steps = llround(cfg.t_final / cfg.lat.dt);
    size_t si = 0;
    auto maybe_snap = [&](long long j, const SolverState& s) {
        while (si < snap_steps.size() && snap_steps[si] == j) {
            tr.snap_steps.push_back(j);
            tr.snaps.push_back(s.real_field());
            ++si;
        }
    };
    maybe_snap(0, st);
    for (long long j = 0; j < n_steps; ++j) {
        if (!step(st, cfg)) {
            tr.blew_up = true;
            tr.stop_step = st.j;
            return tr;
        }
        maybe_snap(st.j, st);
    }
    tr.stop_step = st.j;
    return tr;
}

}  // namespace wz
