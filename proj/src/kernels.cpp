#include "bmc/kernels.hpp"

#include "bmc/fft.hpp"
#include "bmc/parallel.hpp"

#include <cmath>
#include <numbers>

namespace bmc {

namespace {
constexpr double kPi = std::numbers::pi;

KernelTable make_table(std::size_t n, const std::function<double(long long)>& f) {
    KernelTable k;
    k.n = n;
    k.c.resize(2 * n - 1);
    const long long nn = static_cast<long long>(n);
    for (long long d = -(nn - 1); d <= nn - 1; ++d)
        k.c[static_cast<std::size_t>(d + nn - 1)] = f(d);
    return k;
}
}  // namespace

KernelTable poisson_cells(double t, double h, std::size_t n) {
    return make_table(n, [&](long long d) {
        const double a = (static_cast<double>(d) - 0.5) * h;
        const double b = (static_cast<double>(d) + 0.5) * h;
        return (std::atan(b / t) - std::atan(a / t)) / kPi;
    });
}

KernelTable conj_poisson_cells(double t, double h, std::size_t n) {
    return make_table(n, [&](long long d) {
        const double a = (static_cast<double>(d) - 0.5) * h;
        const double b = (static_cast<double>(d) + 0.5) * h;
        return 0.5 / kPi * (std::log(b * b + t * t) - std::log(a * a + t * t));
    });
}

KernelTable hilbert_pv_cells(double h, std::size_t n) {
    return make_table(n, [&](long long d) {
        if (d == 0) return 0.0;
        const double a = (static_cast<double>(d) - 0.5) * h;
        const double b = (static_cast<double>(d) + 0.5) * h;
        return std::log(std::abs(b / a)) / kPi;
    });
}

KernelTable hilbert_pv_points(double h, std::size_t n) {
    (void)h;
    return make_table(n, [&](long long d) {
        if (d == 0) return 0.0;
        return 1.0 / (kPi * static_cast<double>(d));
    });
}

KernelTable neglog_cells(double h, std::size_t n) {
    // int -log|u| du = u - u log|u|
    auto F = [](double u) { return u == 0.0 ? 0.0 : u - u * std::log(std::abs(u)); };
    return make_table(n, [&](long long d) {
        const double a = (static_cast<double>(d) - 0.5) * h;
        const double b = (static_cast<double>(d) + 0.5) * h;
        return F(b) - F(a);
    });
}

namespace {

template <typename T>
std::vector<T> convolve_direct(const std::vector<T>& f, const KernelTable& k, bool use_omp) {
    const std::size_t n = f.size();
    std::vector<T> out(n);
    const long long nn = static_cast<long long>(n);
    const double* kc = k.c.data() + (nn - 1);
#pragma omp parallel for schedule(static) if (use_omp && par::enabled())
    for (long long i = 0; i < nn; ++i) {
        T acc{};
        for (long long j = 0; j < nn; ++j) acc += f[static_cast<std::size_t>(j)] * kc[i - j];
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

template <typename T>
std::vector<T> convolve_dispatch(const std::vector<T>& f, const KernelTable& k, ConvRoute route) {
    if (f.size() != k.n) throw std::invalid_argument("convolve: table size mismatch");
    if (route == ConvRoute::automatic)
        route = f.size() >= 2048 ? ConvRoute::fft : ConvRoute::omp;
    switch (route) {
        case ConvRoute::serial: return convolve_direct(f, k, false);
        case ConvRoute::omp: return convolve_direct(f, k, true);
        default: break;
    }
    // FFT route: linear convolution via zero-padding
    const std::size_t n = f.size();
    const std::size_t m = next_pow2(3 * n);  // >= n + 2n-1
    std::vector<cplx> fa(m, cplx(0.0, 0.0)), kb(m, cplx(0.0, 0.0));
    for (std::size_t j = 0; j < n; ++j) fa[j] = cplx(0, 0) + f[j];
    // place offset d at index d + n-1 so output i sits at i + n-1
    for (std::size_t idx = 0; idx < k.c.size(); ++idx) kb[idx] = k.c[idx];
    dft_pow2(fa, -1);
    dft_pow2(kb, -1);
    for (std::size_t j = 0; j < m; ++j) fa[j] *= kb[j] / static_cast<double>(m);
    dft_pow2(fa, +1);
    std::vector<T> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx z = fa[i + n - 1];
        if constexpr (std::is_same_v<T, double>)
            out[i] = z.real();
        else
            out[i] = z;
    }
    return out;
}

}  // namespace

std::vector<double> convolve(const std::vector<double>& f, const KernelTable& k, ConvRoute route) {
    return convolve_dispatch(f, k, route);
}

std::vector<cplx> convolve(const std::vector<cplx>& f, const KernelTable& k, ConvRoute route) {
    return convolve_dispatch(f, k, route);
}

}  // namespace bmc
