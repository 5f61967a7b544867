#include <doctest.h>

#include "bmc/fft.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace bmc;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Grid sym_grid(double X, std::size_t n) { return Grid(-X, 2.0 * X / static_cast<double>(n), n); }
}  // namespace

TEST_CASE("gaussian is self-dual under the chosen convention") {
    const Grid g = sym_grid(8.0, 4096);
    SampledFunction f = sample_real(g, [](double x) { return std::exp(-kPi * x * x); });
    SampledFunction F = fourier(f);
    double err = 0.0;
    for (std::size_t k = 0; k < F.size(); ++k) {
        const double xi = F.grid.point(k);
        err = std::max(err, std::abs(F.values[k] - cplx(std::exp(-kPi * xi * xi), 0.0)));
    }
    CHECK(err <= 1e-8);
    // dual grid invariant
    CHECK(F.grid.step * g.step * static_cast<double>(g.count) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Poisson kernel transforms to exp(-2 pi t |xi|)") {
    const Grid g = sym_grid(512.0, 1 << 16);
    const double t = 1.0;
    SampledFunction f = sample_real(g, [t](double x) { return t / (kPi * (x * x + t * t)); });
    SampledFunction F = fourier(f);
    double err = 0.0;
    for (std::size_t k = 0; k < F.size(); ++k) {
        const double xi = F.grid.point(k);
        if (std::abs(xi) > 4.0) continue;
        err = std::max(err, std::abs(F.values[k] - cplx(std::exp(-kTwoPi * t * std::abs(xi)), 0.0)));
    }
    CHECK(err <= 2e-3);  // 1/x^2 grid truncation limits the kernel test
    // e^{-2 pi |xi|} back to P_1
    SampledFunction gsp = sample_real(sym_grid(64.0, 1 << 18),
                                      [](double xi) { return std::exp(-kTwoPi * std::abs(xi)); });
    SampledFunction back = inverse_fourier(gsp);
    double err2 = 0.0;
    for (std::size_t j = 0; j < back.size(); ++j) {
        const double x = back.grid.point(j);
        if (std::abs(x) > 4.0) continue;
        err2 = std::max(err2, std::abs(back.values[j] - cplx(1.0 / (kPi * (1.0 + x * x)), 0.0)));
    }
    CHECK(err2 <= 1e-6);
}

TEST_CASE("round trip reproduces band-limited data") {
    const Grid g = sym_grid(16.0, 2048);
    std::mt19937_64 rng(99);
    std::normal_distribution<double> N01(0.0, 1.0);
    SampledFunction f = sample_real(g, [](double) { return 0.0; });
    for (int m = 1; m <= 9; ++m) {
        const double a = N01(rng), b = N01(rng);
        for (std::size_t j = 0; j < g.count; ++j) {
            const double x = g.point(j);
            f.values[j] += std::exp(-0.1 * x * x) * (a * std::cos(0.9 * m * x) + b * std::sin(0.9 * m * x));
        }
    }
    SampledFunction back = inverse_fourier(fourier(f), g.x_min);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < g.count; ++j) {
        num += std::norm(back.values[j] - f.values[j]);
        den += std::norm(f.values[j]);
    }
    CHECK(std::sqrt(num / den) <= 1e-10);
    // Parseval
    CHECK(std::abs(f.norm_l2() - fourier(f).norm_l2()) / f.norm_l2() <= 1e-10);
}

TEST_CASE("zero transforms to zero") {
    const Grid g = sym_grid(4.0, 256);
    SampledFunction z = sample_real(g, [](double) { return 0.0; });
    SampledFunction F = inverse_fourier(z);
    CHECK(F.max_abs() == 0.0);
}

TEST_CASE("indicator of [0, eps T] inverts to the sinc-type factor") {
    // oracle: direct antiderivative of the exponential
    const double a = 0.1;  // eps T with eps = 0.2, T = 0.5
    const double step = 0.1 / 820.0;
    const std::size_t n = 1 << 18;
    const Grid g(-step * static_cast<double>(n / 2), step, n);
    SampledFunction ind = sample_real(g, [a](double x) {
        if (x < 0.0 || x > a) return 0.0;
        return 1.0;
    });
    // trapezoid convention at the jumps
    ind.values[g.nearest(0.0)] = 0.5;
    ind.values[g.nearest(a)] = 0.5;
    SampledFunction F = fourier(ind);
    double err = 0.0;
    for (std::size_t k = 0; k < F.size(); ++k) {
        const double v = F.grid.point(k);
        if (std::abs(v) > 40.0) continue;
        cplx expected;
        if (std::abs(v) < 1e-10) {
            expected = a;
        } else {
            // a * i(e^{-2 i pi a v} - 1)/(2 pi a v)
            expected = cplx(0.0, 1.0) * (std::exp(cplx(0.0, -kTwoPi * a * v)) - 1.0) / (kTwoPi * v);
        }
        err = std::max(err, std::abs(F.values[k] - expected));
    }
    CHECK(err <= 1e-6);
}

TEST_CASE("parity: real even input gives real even spectrum, odd gives imaginary") {
    const Grid g = sym_grid(8.0, 2048);
    SampledFunction even = sample_real(g, [](double x) { return std::exp(-x * x); });
    SampledFunction Fe = fourier(even);
    double max_imag = 0.0;
    for (const auto& z : Fe.values) max_imag = std::max(max_imag, std::abs(z.imag()));
    CHECK(max_imag <= 1e-10);

    SampledFunction odd = sample_real(g, [](double x) { return x * std::exp(-x * x); });
    SampledFunction Fo = fourier(odd);
    double max_real = 0.0;
    for (const auto& z : Fo.values) max_real = std::max(max_real, std::abs(z.real()));
    CHECK(max_real <= 1e-10);
}

TEST_CASE("padding refuses aliasing inputs and reports the Nyquist figure") {
    const Grid g(-4.0, 8.0 / 1000.0, 1000);  // not a power of two
    SampledFunction f = sample_real(g, [](double) { return 1.0; });
    CHECK_THROWS_WITH_AS(fourier(f), doctest::Contains("Nyquist"), std::invalid_argument);
    SampledFunction ok = sample_real(g, [](double x) { return std::exp(-4.0 * x * x); });
    CHECK_NOTHROW(fourier(ok));  // endpoints ~ e^{-64}, padding admissible
}

TEST_CASE("non-finite input rejected") {
    const Grid g(-1.0, 0.5, 4);
    SampledFunction f = sample_real(g, [](double) { return 1.0; });
    f.values[1] = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
    CHECK_THROWS_AS(fourier(f), std::invalid_argument);
}
