#include <doctest.h>

#include "bmc/kernels.hpp"
#include "bmc/multiplier.hpp"
#include "bmc/parallel.hpp"

#include <cmath>
#include <random>

using namespace bmc;

TEST_CASE("convolution routes agree: serial, omp, fft") {
    const std::size_t n = 4096;
    const double h = 1.0 / 64.0;
    std::mt19937_64 rng(21);
    std::normal_distribution<double> N01(0.0, 1.0);
    std::vector<double> f(n);
    for (auto& v : f) v = N01(rng);
    using KernelMaker = KernelTable (*)(double, std::size_t);
    for (const KernelMaker make : {KernelMaker(&hilbert_pv_cells), KernelMaker(&neglog_cells)}) {
        const KernelTable kt = make(h, n);
        const auto a = convolve(f, kt, ConvRoute::serial);
        const auto b = convolve(f, kt, ConvRoute::omp);
        const auto c = convolve(f, kt, ConvRoute::fft);
        double scale = 0.0;
        for (const double v : a) scale = std::max(scale, std::abs(v));
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(a[i] - b[i]) <= 1e-12 * scale);
            CHECK(std::abs(a[i] - c[i]) <= 1e-9 * scale);
        }
    }
}

TEST_CASE("point and cell pv kernels agree to quadrature order") {
    const std::size_t n = 8192;
    const double h = 1.0 / 128.0;
    const Grid g(-32.0, h, n);
    std::vector<double> f(n);
    for (std::size_t j = 0; j < n; ++j) f[j] = std::exp(-0.3 * g.point(j) * g.point(j));
    const auto cell = convolve(f, hilbert_pv_cells(h, n), ConvRoute::fft);
    const auto point = convolve(f, hilbert_pv_points(h, n), ConvRoute::fft);
    double gap = 0.0;
    for (std::size_t i = n / 4; i < 3 * n / 4; ++i) gap = std::max(gap, std::abs(cell[i] - point[i]));
    CHECK(gap <= 5e-3);  // both rules differ from the pv integral at O(h f')
    CHECK(gap >= 1e-8);  // and from each other (distinct quadrature flavours)
}

TEST_CASE("atomization kernel: serial and omp agree") {
    const std::size_t n = 16384;
    const Grid g(-512.0, 1024.0 / static_cast<double>(n), n);
    std::vector<double> jumps;
    for (double x = -500.0; x < 500.0; x += 2.5) jumps.push_back(x + 0.41);
    std::vector<double> a(n, 0.0), b(n, 0.0);
    detail::atom_log_sum(g, jumps, a, false);
    detail::atom_log_sum(g, jumps, b, true);
    for (std::size_t i = 0; i < n; i += 7) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-13));
}

TEST_CASE("runtime parallel switch is honoured") {
    const bool was = par::enabled();
    par::set_enabled(false);
    CHECK(!par::enabled());
    par::set_enabled(true);
    CHECK(par::enabled());
    par::set_enabled(was);
    CHECK(par::max_threads() >= 1);
}

TEST_CASE("pipeline is invariant under the parallel switch") {
    ParticularOptions po;
    po.variant = true;
    po.count = 1 << 14;
    po.x_half = 512.0;
    po.pad = 64.0;
    const bool was = par::enabled();
    par::set_enabled(true);
    const MultiplierResult r1 = build_multiplier_particular(0.5, 0.2, po);
    par::set_enabled(false);
    const MultiplierResult r2 = build_multiplier_particular(0.5, 0.2, po);
    par::set_enabled(was);
    CHECK(r1.support_leakage == doctest::Approx(r2.support_leakage).epsilon(1e-10));
    double gap = 0.0;
    for (std::size_t j = 0; j < r1.hfun.size(); j += 31)
        gap = std::max(gap, std::abs(r1.hfun[j] - r2.hfun[j]));
    CHECK(gap <= 1e-12 * r1.renorm_scale);
}
