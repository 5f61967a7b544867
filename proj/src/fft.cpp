#include "bmc/fft.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace bmc {

namespace {
constexpr double kPi = std::numbers::pi;
}

bool is_pow2(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 2;
    while (p < n) p <<= 1;
    return p;
}

void dft_pow2(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    if (!is_pow2(n)) throw std::invalid_argument("dft_pow2: length not a power of two");
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    // twiddle table for the largest stage
    std::vector<cplx> w(n / 2);
    const double ang = sign * 2.0 * kPi / static_cast<double>(n);
    for (std::size_t k = 0; k < n / 2; ++k)
        w[k] = cplx(std::cos(ang * static_cast<double>(k)), std::sin(ang * static_cast<double>(k)));
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w[k * stride];
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

namespace {

// Zero-pad to a power of two, guarding against wrap-around: only admissible
// when the function has decayed at the grid ends.
std::vector<cplx> padded_values(const SampledFunction& f, double pad_tol, const char* who) {
    f.require_finite(who);
    const std::size_t n = f.size();
    if (is_pow2(n)) return f.values;
    const double m = f.max_abs();
    const double edge = std::max(std::abs(f.values.front()), std::abs(f.values.back()));
    if (m > 0.0 && edge > pad_tol * m) {
        std::ostringstream os;
        os << who << ": count " << n << " is not a power of two and endpoint magnitude "
           << edge << " exceeds " << pad_tol << " * max|f| = " << pad_tol * m
           << "; zero-padding would alias (Nyquist " << 0.5 / f.grid.step << ")";
        throw std::invalid_argument(os.str());
    }
    std::vector<cplx> v = f.values;
    v.resize(next_pow2(n), cplx(0.0, 0.0));
    return v;
}

}  // namespace

FrequencyGrid dual_grid(const Grid& g) {
    FrequencyGrid fg;
    fg.count = g.count;
    fg.step = 1.0 / (g.step * static_cast<double>(g.count));
    fg.xi_min = -0.5 / g.step;
    return fg;
}

SampledFunction fourier(const SampledFunction& f, std::optional<double> xi_min, double pad_tol) {
    std::vector<cplx> a = padded_values(f, pad_tol, "fourier");
    const std::size_t n = a.size();
    const double h = f.grid.step;
    const double x0 = f.grid.x_min;
    const double dxi = 1.0 / (h * static_cast<double>(n));
    const double xi0 = xi_min.value_or(-0.5 / h);
    // pre-phase e^{-2 pi i j h xi0}
    for (std::size_t j = 0; j < n; ++j) {
        const double ph = -2.0 * kPi * static_cast<double>(j) * h * xi0;
        a[j] *= cplx(std::cos(ph), std::sin(ph));
    }
    dft_pow2(a, -1);
    Grid out(xi0, dxi, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double xik = out.point(k);
        const double ph = -2.0 * kPi * x0 * xik;
        a[k] *= h * cplx(std::cos(ph), std::sin(ph));
    }
    return SampledFunction(out, std::move(a));
}

SampledFunction inverse_fourier(const SampledFunction& g, std::optional<double> x_min, double pad_tol) {
    std::vector<cplx> a = padded_values(g, pad_tol, "inverse_fourier");
    const std::size_t n = a.size();
    const double dxi = g.grid.step;
    const double xi0 = g.grid.x_min;
    const double h = 1.0 / (dxi * static_cast<double>(n));
    const double x0 = x_min.value_or(-0.5 / dxi);
    for (std::size_t k = 0; k < n; ++k) {
        const double ph = 2.0 * kPi * static_cast<double>(k) * dxi * x0;
        a[k] *= cplx(std::cos(ph), std::sin(ph));
    }
    dft_pow2(a, +1);
    Grid out(x0, h, n);
    for (std::size_t j = 0; j < n; ++j) {
        const double xj = out.point(j);
        const double ph = 2.0 * kPi * xi0 * xj;
        a[j] *= dxi * cplx(std::cos(ph), std::sin(ph));
    }
    return SampledFunction(out, std::move(a));
}

}  // namespace bmc
