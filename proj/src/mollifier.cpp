#include "wz/mollifier.hpp"

#include <cmath>
#include <stdexcept>

namespace wz {

double bump(double s) {
    double s2 = s * s;
    if (s2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - s2));
}

double Mollifier::mass() const {
    double mt = 0;
    for (double w : w_time) mt += w;
    mt *= lat.dt;
    double ms = 0;
    for (double r : rho2) ms += r;
    for (int i = 0; i < lat.d; ++i) ms *= lat.dx();
    return mt * ms;
}

Mollifier build_mollifier(const Lattice& lat, double eps) {
    lat.validate();
    if (!(eps >= 2.0 * lat.dx()))
        throw std::invalid_argument("build_mollifier: eps under-resolved, need eps >= 2 dx");
    if (!(eps < 0.5))
        throw std::invalid_argument("build_mollifier: eps must be below half the torus size");
    Mollifier m;
    m.lat = lat;
    m.eps = eps;

    // time factor at scale eps^2
    double te = eps * eps;
    int rad = int(std::floor(te / lat.dt));
    if (rad * lat.dt >= te) rad = std::max(0, rad - 1);
    m.jt_rad = rad;
    m.w_time.assign(size_t(2 * rad + 1), 0.0);
    double acc = 0;
    for (int j = -rad; j <= rad; ++j) {
        double w = bump(double(j) * lat.dt / te);
        m.w_time[size_t(j + rad)] = w;
        acc += w;
    }
    if (acc <= 0) {  // degenerate: delta on the lattice
        m.w_time.assign(1, 1.0);
        m.jt_rad = 0;
        acc = 1.0;
    }
    for (double& w : m.w_time) w /= (acc * lat.dt);

    // spatial factor: tensor product of one-dimensional bumps at scale eps
    size_t nc = lat.ncells();
    m.rho2.assign(nc, 0.0);
    double mass = 0;
    int ix[3];
    for (size_t c = 0; c < nc; ++c) {
        spatial_coords(lat, c, ix);
        double w = 1;
        for (int i = 0; i < lat.d; ++i) w *= bump(torus_coord(lat, ix[i]) / eps);
        m.rho2[c] = w;
        mass += w;
    }
    double dxd = 1;
    for (int i = 0; i < lat.d; ++i) dxd *= lat.dx();
    mass *= dxd;
    if (mass <= 0) throw std::runtime_error("build_mollifier: empty spatial bump");
    for (double& w : m.rho2) w /= mass;
    m.rho2_hat = spatial_fft(m.rho2.data(), lat.d, lat.n);
    return m;
}

}  // namespace wz
