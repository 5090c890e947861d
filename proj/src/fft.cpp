#include "wz/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace wz {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

void fft_inplace(cplx* a, size_t n, bool inverse) {
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft_inplace: length must be a power of two");
    // bit reversal
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        double ang = 2.0 * M_PI / double(len) * (inverse ? 1.0 : -1.0);
        cplx wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (size_t j = 0; j < len / 2; ++j) {
                cplx u = a[i + j];
                cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        double inv = 1.0 / double(n);
        for (size_t i = 0; i < n; ++i) a[i] *= inv;
    }
}

void fft_nd(cplx* a, int d, int n, bool inverse) {
    size_t total = 1;
    for (int i = 0; i < d; ++i) total *= size_t(n);
    std::vector<cplx> line(n);
    // transform along each axis
    size_t stride = 1;
    for (int axis = d - 1; axis >= 0; --axis) {
        size_t nlines = total / size_t(n);
        for (size_t li = 0; li < nlines; ++li) {
            // index of the first element of this line
            size_t block = li / stride;
            size_t offset = li % stride;
            size_t base = block * stride * size_t(n) + offset;
            for (int k = 0; k < n; ++k) line[k] = a[base + size_t(k) * stride];
            fft_inplace(line.data(), size_t(n), inverse);
            for (int k = 0; k < n; ++k) a[base + size_t(k) * stride] = line[k];
        }
        stride *= size_t(n);
    }
}

std::vector<cplx> spatial_fft(const double* slice, int d, int n) {
    size_t total = 1;
    for (int i = 0; i < d; ++i) total *= size_t(n);
    std::vector<cplx> spec(total);
    for (size_t i = 0; i < total; ++i) spec[i] = slice[i];
    fft_nd(spec.data(), d, n, false);
    double dxd = 1.0;
    for (int i = 0; i < d; ++i) dxd /= double(n);
    for (auto& z : spec) z *= dxd;
    return spec;
}

void spatial_ifft(std::vector<cplx> spec, int d, int n, double* out_slice) {
    // undo the dx^d factor, then plain inverse transform (the mode sum)
    size_t total = spec.size();
    double ndd = 1.0;
    for (int i = 0; i < d; ++i) ndd *= double(n);
    fft_nd(spec.data(), d, n, true);
    for (size_t i = 0; i < total; ++i) out_slice[i] = spec[i].real() * ndd;
}

}  // namespace wz
