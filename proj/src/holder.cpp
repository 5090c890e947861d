#include "wz/holder.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "wz/mollifier.hpp"

namespace wz {

namespace {

// centered bump per axis, support |u| < 1/2
double cbump(double u) { return bump(2.0 * u); }

}  // namespace

double HolderEstimate::fitted_exponent() const {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t n = scales.size();
    for (size_t i = 0; i < n; ++i) {
        double x = std::log(scales[i]);
        double y = std::log(std::max(sup_pairing[i], 1e-300));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    return (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
}

double holder_pair(const GridField& F, long long jz, size_t cz, double lambda) {
    const Lattice& lat = F.lat;
    double l2 = lambda * lambda;
    double norm = std::pow(lambda, -double(lat.d + 2));
    int czi[3];
    spatial_coords(lat, cz, czi);
    long long ja = (long long)std::floor(double(jz) - 0.5 * l2 / lat.dt) - 1;
    long long jb = (long long)std::ceil(double(jz) + 0.5 * l2 / lat.dt) + 1;
    int rad = (int)std::ceil(0.5 * lambda / lat.dx()) + 1;
    double dv = lat.cell_volume();
    double acc = 0;
    double u[4];
    int ix[3];
    for (long long j = ja; j <= jb; ++j) {
        if (j < F.j0 || j >= F.j0 + F.nt) continue;
        u[0] = double(j - jz) * lat.dt / l2;
        double w0 = cbump(u[0]);
        if (w0 == 0) continue;
        const double* s = F.slice(int(j - F.j0));
        std::function<void(int, double)> rec = [&](int axis, double w) {
            if (axis == lat.d) {
                size_t cell = 0;
                for (int i = 0; i < lat.d; ++i) cell = cell * size_t(lat.n) + size_t(ix[i]);
                acc += w * s[cell];
                return;
            }
            for (int o = -rad; o <= rad; ++o) {
                double wu = cbump(double(o) * lat.dx() / lambda);
                if (wu == 0) continue;
                ix[axis] = ((czi[axis] + o) % lat.n + lat.n) % lat.n;
                rec(axis + 1, w * wu);
            }
        };
        rec(0, w0);
    }
    return acc * norm * dv;
}

HolderEstimate holder_seminorm(const GridField& F, double alpha_p,
                               const std::vector<double>& scales, long long region_j_lo,
                               long long region_j_hi) {
    if (!(alpha_p < 0)) throw std::invalid_argument("holder_seminorm: alpha' must be < 0");
    if (scales.size() < 1) throw std::invalid_argument("holder_seminorm: need scales");
    const Lattice& lat = F.lat;
    HolderEstimate est;
    est.alpha_p = alpha_p;
    for (double lam : scales) {
        if (lam < 4 * lat.dx() || lam * lam < 4 * lat.dt)
            throw std::invalid_argument("holder_seminorm: scale under-resolved");
        long long jstep = std::max<long long>(1, llround(lam * lam / lat.dt));
        int xstep = std::max(1, int(llround(lam / lat.dx())));
        double sup = 0;
        for (long long jz = region_j_lo; jz < region_j_hi; jz += jstep) {
            // keep the bump support inside the field window
            if (double(jz - F.j0) * lat.dt < 0.55 * lam * lam) continue;
            if (double(F.j0 + F.nt - jz) * lat.dt < 0.55 * lam * lam) continue;
            int ix[3] = {0, 0, 0};
            std::function<void(int)> rec = [&](int axis) {
                if (axis == lat.d) {
                    size_t cell = 0;
                    for (int i = 0; i < lat.d; ++i)
                        cell = cell * size_t(lat.n) + size_t(ix[i]);
                    double p = holder_pair(F, jz, cell, lam);
                    sup = std::max(sup, std::fabs(p));
                    return;
                }
                for (int q = 0; q < lat.n; q += xstep) {
                    ix[axis] = q;
                    rec(axis + 1);
                }
            };
            rec(0);
        }
        est.scales.push_back(lam);
        est.sup_pairing.push_back(sup);
        est.scaled.push_back(std::pow(lam, -alpha_p) * sup);
    }
    est.seminorm = 0;
    for (double v : est.scaled) est.seminorm = std::max(est.seminorm, v);
    return est;
}

double spatial_holder_pair(const GridField& F, int j, size_t cz, double lambda) {
    const Lattice& lat = F.lat;
    double norm = std::pow(lambda, -double(lat.d));
    int czi[3];
    spatial_coords(lat, cz, czi);
    int rad = (int)std::ceil(0.5 * lambda / lat.dx()) + 1;
    double dxd = 1;
    for (int i = 0; i < lat.d; ++i) dxd *= lat.dx();
    const double* s = F.slice(j);
    double acc = 0;
    int ix[3];
    std::function<void(int, double)> rec = [&](int axis, double w) {
        if (axis == lat.d) {
            size_t cell = 0;
            for (int i = 0; i < lat.d; ++i) cell = cell * size_t(lat.n) + size_t(ix[i]);
            acc += w * s[cell];
            return;
        }
        for (int o = -rad; o <= rad; ++o) {
            double wu = cbump(double(o) * lat.dx() / lambda);
            if (wu == 0) continue;
            ix[axis] = ((czi[axis] + o) % lat.n + lat.n) % lat.n;
            rec(axis + 1, w * wu);
        }
    };
    rec(0, 1.0);
    return acc * norm * dxd;
}

HolderEstimate spatial_holder_seminorm(const GridField& F, int j, double alpha_p,
                                       const std::vector<double>& scales) {
    const Lattice& lat = F.lat;
    HolderEstimate est;
    est.alpha_p = alpha_p;
    for (double lam : scales) {
        if (lam < 4 * lat.dx())
            throw std::invalid_argument("spatial_holder_seminorm: scale under-resolved");
        int xstep = std::max(1, int(llround(lam / lat.dx())));
        double sup = 0;
        int ix[3] = {0, 0, 0};
        std::function<void(int)> rec = [&](int axis) {
            if (axis == lat.d) {
                size_t cell = 0;
                for (int i = 0; i < lat.d; ++i) cell = cell * size_t(lat.n) + size_t(ix[i]);
                sup = std::max(sup, std::fabs(spatial_holder_pair(F, j, cell, lam)));
                return;
            }
            for (int q = 0; q < lat.n; q += xstep) {
                ix[axis] = q;
                rec(axis + 1);
            }
        };
        rec(0);
        est.scales.push_back(lam);
        est.sup_pairing.push_back(sup);
        est.scaled.push_back(std::pow(lam, -alpha_p) * sup);
    }
    est.seminorm = 0;
    for (double v : est.scaled) est.seminorm = std::max(est.seminorm, v);
    return est;
}

}  // namespace wz
