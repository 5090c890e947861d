#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wz/fft.hpp"

using namespace wz;

namespace {

// quadratic-cost reference transform
std::vector<cplx> naive_dft(const std::vector<cplx>& a, bool inverse) {
    size_t n = a.size();
    std::vector<cplx> out(n, cplx(0, 0));
    double sgn = inverse ? 1.0 : -1.0;
    for (size_t k = 0; k < n; ++k)
        for (size_t j = 0; j < n; ++j) {
            double ang = sgn * 2.0 * M_PI * double(k * j % n) / double(n);
            out[k] += a[j] * cplx(std::cos(ang), std::sin(ang));
        }
    if (inverse)
        for (auto& z : out) z /= double(n);
    return out;
}

}  // namespace

TEST_CASE("fft matches the naive transform") {
    std::mt19937_64 gen(42);
    std::normal_distribution<double> nd(0, 1);
    for (size_t n : {2, 8, 64, 128}) {
        std::vector<cplx> a(n);
        for (auto& z : a) z = cplx(nd(gen), nd(gen));
        auto ref = naive_dft(a, false);
        auto got = a;
        fft_inplace(got.data(), n, false);
        for (size_t i = 0; i < n; ++i) {
            CHECK(std::abs(got[i] - ref[i]) < 1e-9 * double(n));
        }
    }
}

TEST_CASE("inverse undoes forward") {
    std::mt19937_64 gen(7);
    std::normal_distribution<double> nd(0, 1);
    std::vector<cplx> a(256);
    for (auto& z : a) z = cplx(nd(gen), nd(gen));
    auto b = a;
    fft_inplace(b.data(), b.size(), false);
    fft_inplace(b.data(), b.size(), true);
    for (size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);
}

TEST_CASE("non power of two rejected") {
    std::vector<cplx> a(12);
    CHECK_THROWS_AS(fft_inplace(a.data(), a.size(), false), std::invalid_argument);
}

TEST_CASE("3d transform round trip and single mode") {
    int n = 8, d = 3;
    size_t total = size_t(n) * n * n;
    std::vector<cplx> a(total, cplx(0, 0));
    // plane wave e^{2 pi i (x1 + 2 x3)/n} should transform to a single spike
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double ph = 2.0 * M_PI * (double(i) + 2.0 * double(k)) / n;
                a[size_t((i * n + j) * n + k)] = cplx(std::cos(ph), std::sin(ph));
            }
    auto b = a;
    fft_nd(b.data(), d, n, false);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double expect = (i == 1 && j == 0 && k == 2) ? double(total) : 0.0;
                CHECK(std::abs(b[size_t((i * n + j) * n + k)] - cplx(expect, 0)) <
                      1e-8 * double(total));
            }
    fft_nd(b.data(), d, n, true);
    for (size_t i = 0; i < total; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-11);
}

TEST_CASE("spatial transform conventions: mass and parseval") {
    int n = 32, d = 2;
    size_t total = size_t(n) * n;
    std::vector<double> f(total);
    std::mt19937_64 gen(3);
    std::normal_distribution<double> nd(0, 1);
    for (auto& x : f) x = nd(gen);
    auto F = spatial_fft(f.data(), d, n);
    // F(0) = integral of f
    double mass = 0;
    for (double x : f) mass += x;
    mass /= double(total);  // dx^d = 1/n^d
    CHECK(F[0].real() == doctest::Approx(mass).epsilon(1e-12));
    // sum f^2 dx^d = sum |F|^2
    double lhs = 0;
    for (double x : f) lhs += x * x;
    lhs /= double(total);
    double rhs = 0;
    for (auto& z : F) rhs += std::norm(z);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    // round trip
    std::vector<double> back(total);
    spatial_ifft(F, d, n, back.data());
    for (size_t i = 0; i < total; ++i) CHECK(back[i] == doctest::Approx(f[i]).epsilon(1e-10));
}
