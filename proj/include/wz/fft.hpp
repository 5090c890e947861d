#pragma once

#include <complex>
#include <vector>

namespace wz {

using cplx = std::complex<double>;

/// In-place iterative radix-2 FFT; n must be a power of two.
/// inverse=true applies the conjugate transform and the 1/n factor.
void fft_inplace(cplx* a, size_t n, bool inverse);

/// d-dimensional FFT of an n^d cube stored row-major (last index fastest).
void fft_nd(cplx* a, int d, int n, bool inverse);

/// Spatial transform conventions used throughout: forward multiplies by
/// dx^d = n^{-d} so that F(q) approximates the integral transform on the
/// unit torus; inverse is then the plain mode sum.
std::vector<cplx> spatial_fft(const double* slice, int d, int n);
void spatial_ifft(std::vector<cplx> spec, int d, int n, double* out_slice);

bool is_pow2(int n);

}  // namespace wz
