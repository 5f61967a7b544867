// Timing comparison of the serial reference kernels against the OpenMP and
// FFT-accelerated paths. Prints one table row per kernel/size.

#include "bmc/control_cost.hpp"
#include "bmc/kernels.hpp"
#include "bmc/multiplier.hpp"
#include "bmc/parallel.hpp"
#include "bmc/transforms.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    fn();  // warm up
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void row(const char* kernel, std::size_t n, double serial_ms, double omp_ms, double fft_ms) {
    if (fft_ms >= 0.0)
        std::printf("%-26s n=%-8zu serial %9.3f ms   omp %9.3f ms (x%.2f)   fft %9.3f ms (x%.1f)\n",
                    kernel, n, serial_ms, omp_ms, serial_ms / omp_ms, fft_ms, serial_ms / fft_ms);
    else
        std::printf("%-26s n=%-8zu serial %9.3f ms   omp %9.3f ms (x%.2f)\n", kernel, n, serial_ms,
                    omp_ms, serial_ms / omp_ms);
}

}  // namespace

int main() {
    using namespace bmc;
    std::printf("threads available: %d\n", par::max_threads());
    std::mt19937_64 rng(7);
    std::normal_distribution<double> N01(0.0, 1.0);

    for (const std::size_t n : {4096u, 16384u}) {
        const double h = 64.0 / static_cast<double>(n);
        std::vector<double> f(n);
        for (auto& v : f) v = N01(rng);
        const KernelTable kt = hilbert_pv_cells(h, n);
        const int reps = n <= 4096 ? 8 : 3;
        const double ts = time_ms([&] { convolve(f, kt, ConvRoute::serial); }, reps);
        const double to = time_ms([&] { convolve(f, kt, ConvRoute::omp); }, reps);
        const double tf = time_ms([&] { convolve(f, kt, ConvRoute::fft); }, reps);
        row("hilbert pv convolution", n, ts, to, tf);
        const KernelTable pk = poisson_cells(1.0, h, n);
        const double ps = time_ms([&] { convolve(f, pk, ConvRoute::serial); }, reps);
        const double po = time_ms([&] { convolve(f, pk, ConvRoute::omp); }, reps);
        const double pf = time_ms([&] { convolve(f, pk, ConvRoute::fft); }, reps);
        row("poisson convolution", n, ps, po, pf);
    }

    {
        const std::size_t n = 65536;
        const Grid g(-1024.0, 2048.0 / static_cast<double>(n), n);
        std::vector<double> jumps;
        for (double x = -1000.0; x < 1000.0; x += 2.5) jumps.push_back(x + 0.3);
        std::vector<double> out_s(n, 0.0), out_p(n, 0.0);
        const double ts = time_ms([&] {
            std::fill(out_s.begin(), out_s.end(), 0.0);
            detail::atom_log_sum(g, jumps, out_s, false);
        }, 2);
        const double tp = time_ms([&] {
            std::fill(out_p.begin(), out_p.end(), 0.0);
            detail::atom_log_sum(g, jumps, out_p, true);
        }, 2);
        row("atomization log sum", n, ts, tp, -1.0);
    }

    {
        const std::size_t N = 2048;
        const bool was = par::enabled();
        par::set_enabled(false);
        const double ts = time_ms([&] { hilbert_form_check(N); }, 1);
        par::set_enabled(true);
        const double tp = time_ms([&] { hilbert_form_check(N); }, 1);
        par::set_enabled(was);
        row("hilbert-form power iter", N, ts, tp, -1.0);
    }

    return 0;
}
