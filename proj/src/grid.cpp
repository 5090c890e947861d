#include "wz/grid.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace wz {

void Lattice::validate() const {
    if (d < 1 || d > 3) throw std::invalid_argument("Lattice: d must be 1, 2 or 3");
    if (!is_pow2(n)) throw std::invalid_argument("Lattice: n must be a power of two");
    if (!(dt > 0)) throw std::invalid_argument("Lattice: dt must be positive");
}

double GridField::max_abs() const {
    double m = 0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

double GridField::slice_l2(int j) const {
    const double* s = slice(j);
    double acc = 0;
    size_t nc = lat.ncells();
    for (size_t i = 0; i < nc; ++i) acc += s[i] * s[i];
    double dxd = 1;
    for (int i = 0; i < lat.d; ++i) dxd *= lat.dx();
    return std::sqrt(acc * dxd);
}

double GridField::slice_mean(int j) const {
    const double* s = slice(j);
    double acc = 0;
    size_t nc = lat.ncells();
    for (size_t i = 0; i < nc; ++i) acc += s[i];
    return acc / double(nc);
}

void spatial_coords(const Lattice& lat, size_t idx, int* ix) {
    for (int i = lat.d - 1; i >= 0; --i) {
        ix[i] = int(idx % size_t(lat.n));
        idx /= size_t(lat.n);
    }
}

double torus_coord(const Lattice& lat, int ix) {
    double x = double(ix) * lat.dx();
    if (x >= 0.5) x -= 1.0;
    return x;
}

double torus_r2(const Lattice& lat, size_t idx) {
    int ix[3] = {0, 0, 0};
    spatial_coords(lat, idx, ix);
    double r2 = 0;
    for (int i = 0; i < lat.d; ++i) {
        double x = torus_coord(lat, ix[i]);
        r2 += x * x;
    }
    return r2;
}

double parabolic_norm(const Lattice& lat, double t, size_t idx) {
    int ix[3] = {0, 0, 0};
    spatial_coords(lat, idx, ix);
    double s = std::sqrt(std::fabs(t));
    for (int i = 0; i < lat.d; ++i) s += std::fabs(torus_coord(lat, ix[i]));
    return s;
}

namespace {
constexpr char kMagic[4] = {'W', 'Z', 'F', 'B'};
constexpr uint32_t kVersion = 1;
}  // namespace

void save_field(const GridField& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_field: cannot open " + path);
    os.write(kMagic, 4);
    auto w32 = [&](uint32_t x) { os.write(reinterpret_cast<const char*>(&x), 4); };
    auto w64 = [&](uint64_t x) { os.write(reinterpret_cast<const char*>(&x), 8); };
    w32(kVersion);
    w32(uint32_t(f.lat.d));
    w32(uint32_t(f.lat.n));
    w32(uint32_t(f.nt));
    w64(uint64_t(f.j0));
    os.write(reinterpret_cast<const char*>(&f.lat.dt), 8);
    os.write(reinterpret_cast<const char*>(f.v.data()), std::streamsize(f.v.size() * 8));
}

GridField load_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_field: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("load_field: bad magic in " + path);
    auto r32 = [&] { uint32_t x; is.read(reinterpret_cast<char*>(&x), 4); return x; };
    auto r64 = [&] { uint64_t x; is.read(reinterpret_cast<char*>(&x), 8); return x; };
    uint32_t ver = r32();
    if (ver != kVersion) throw std::runtime_error("load_field: unsupported version");
    Lattice lat;
    lat.d = int(r32());
    lat.n = int(r32());
    int nt = int(r32());
    long long j0 = (long long)r64();
    is.read(reinterpret_cast<char*>(&lat.dt), 8);
    GridField f(lat, j0, nt);
    is.read(reinterpret_cast<char*>(f.v.data()), std::streamsize(f.v.size() * 8));
    if (!is) throw std::runtime_error("load_field: truncated file " + path);
    return f;
}

void save_field_csv(const GridField& f, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("save_field_csv: cannot open " + path);
    os.precision(17);
    os << "t";
    for (int i = 0; i < f.lat.d; ++i) os << ",x" << (i + 1);
    os << ",value\n";
    int ix[3];
    for (int j = 0; j < f.nt; ++j)
        for (size_t c = 0; c < f.lat.ncells(); ++c) {
            spatial_coords(f.lat, c, ix);
            os << f.t(j);
            for (int i = 0; i < f.lat.d; ++i) os << "," << double(ix[i]) * f.lat.dx();
            os << "," << f.at(j, c) << "\n";
        }
}

}  // namespace wz
