#include "bmc/transforms.hpp"

#include "bmc/fft.hpp"
#include "bmc/parallel.hpp"
#include "bmc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace bmc {

namespace {
constexpr double kPi = std::numbers::pi;

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

std::vector<cplx> kober_second_term(const SampledFunction& f) {
    // scalar: (1/pi) sum_j f_j int_{cell_j} y/(y^2+1) dy, same for every x_i
    const Grid& g = f.grid;
    const double h = g.step;
    cplx acc = 0.0;
    for (std::size_t j = 0; j < g.count; ++j) {
        const double y = g.point(j);
        const double a = y - 0.5 * h, b = y + 0.5 * h;
        acc += f.values[j] * 0.5 * (std::log1p(b * b) - std::log1p(a * a));
    }
    return {acc / kPi};
}

struct TailKernel {
    // integrand builder: returns lambda y -> env(y) * kernel(x, y)
    std::function<double(double, double)> k;  // k(x, y)
};

void add_tails(std::vector<cplx>& out, const Grid& g, const TransformInput& in,
               const std::function<double(double, double)>& kxy, double guard_frac,
               const char* who) {
    if (!in.envelope_right && !in.envelope_left) return;
    const double xmax = g.x_max(), xmin = g.x_min;
    // growing weights (the sqrt-type log-weights) rely on the analytic tail by
    // design; the smallness guard only makes sense for decaying envelopes
    auto growing = [](const std::function<double(double)>& env, double edge) {
        return env && std::abs(env(16.0 * edge)) >= 0.99 * std::abs(env(edge));
    };
    if (growing(in.envelope_right, std::abs(xmax)) || growing(in.envelope_left, std::abs(xmin)))
        guard_frac = 0.0;  // correction-dominated by design; no smallness check
    std::vector<double> tails(g.count, 0.0);
    const long long n = static_cast<long long>(g.count);
#pragma omp parallel for schedule(static) if (par::enabled())
    for (long long i = 0; i < n; ++i) {
        const double x = g.point(static_cast<std::size_t>(i));
        double tl = 0.0;
        if (in.envelope_right)
            tl += tail_integral([&](double y) { return in.envelope_right(y) * kxy(x, y); },
                                xmax + 0.5 * g.step, +1);
        if (in.envelope_left)
            tl += tail_integral([&](double y) { return in.envelope_left(y) * kxy(x, y); },
                                xmin - 0.5 * g.step, -1);
        tails[static_cast<std::size_t>(i)] = tl;
    }
    double max_tail = 0.0, max_out = 0.0;
    for (std::size_t i = 0; i < g.count; ++i) {
        out[i] += tails[i];
        // interior-region convention: edge samples carry truncation error by
        // construction, so the guard watches the central half only
        if (i >= g.count / 4 && i < 3 * g.count / 4) {
            max_tail = std::max(max_tail, std::abs(tails[i]));
            max_out = std::max(max_out, std::abs(out[i]));
        }
    }
    if (guard_frac > 0.0 && max_tail > guard_frac * (max_out + 1e-300)) {
        std::ostringstream os;
        os << who << ": tail correction " << max_tail << " exceeds " << guard_frac
           << " of result magnitude " << max_out << " (grid too small)";
        throw std::runtime_error(os.str());
    }
}

// Straddled-cell repair: replace the rectangle contribution of the cell that
// contains a declared jump by the exact piecewise-constant integral. Kx is the
// antiderivative in y of the full kernel (1/pi included).
void apply_jump_corrections(std::vector<cplx>& out, const TransformInput& in,
                            const std::function<double(double, double)>& Kx,
                            long long radius_cells) {
    if (in.jumps.empty()) return;
    const Grid& g = in.f.grid;
    const double h = g.step;
    const long long n = static_cast<long long>(g.count);
    for (const auto& J : in.jumps) {
        const long long jc = static_cast<long long>(g.nearest(J.x));
        double lo = g.point(static_cast<std::size_t>(jc)) - 0.5 * h;
        double hi = lo + h;
        long long jown = jc;
        if (J.x < lo) { jown = jc - 1; lo -= h; hi -= h; }
        else if (J.x > hi) { jown = jc + 1; lo += h; hi += h; }
        if (jown < 0 || jown >= n) continue;
        const cplx fj = in.f.values[static_cast<std::size_t>(jown)];
        const long long i0 = std::max<long long>(0, jown - radius_cells);
        const long long i1 = std::min<long long>(n - 1, jown + radius_cells);
#pragma omp parallel for schedule(static) if (par::enabled())
        for (long long i = i0; i <= i1; ++i) {
            const double x = g.point(static_cast<std::size_t>(i));
            if (std::abs(x - J.x) < 1e-12) continue;
            const double exact = J.left * (Kx(x, J.x) - Kx(x, lo)) +
                                 J.right * (Kx(x, hi) - Kx(x, J.x));
            // the base rule used the exact cell integral with the sample value;
            // Kx(hi)-Kx(lo) reproduces it (principal value included for i==jown)
            const cplx base = fj * (Kx(x, hi) - Kx(x, lo));
            out[static_cast<std::size_t>(i)] += cplx(exact, 0.0) - base;
        }
    }
}


// The punctured pv rule misses the center cell, whose principal value is
// -h f'(x) + O(h^3); with the cell-averaged kernel the residual first-moment
// sum contributes another factor, total ln2 * h f'(x)/pi. Centered differences
// supply f'; cells adjacent to a declared jump are left to the jump repair.
void add_pv_derivative_correction(std::vector<cplx>& out, const TransformInput& in) {
    const Grid& g = in.f.grid;
    const std::size_t n = g.count;
    const double c = std::numbers::ln2 / (2.0 * kPi);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double x = g.point(i);
        bool near_jump = false;
        for (const auto& J : in.jumps)
            if (std::abs(x - J.x) < 1.5 * g.step) { near_jump = true; break; }
        if (near_jump) continue;
        out[i] -= c * (in.f.values[i + 1] - in.f.values[i - 1]);
    }
}

}  // namespace

void TransformInput::validate() const {
    f.require_finite("TransformInput");
    const std::size_t n = f.size();
    const std::size_t tail = std::max<std::size_t>(1, n / 10);
    const double scale = f.max_abs();
    auto check_side = [&](const std::function<double(double)>& env, std::size_t from,
                          std::size_t to) {
        if (!env) return;
        for (std::size_t j = from; j < to; ++j) {
            const double x = f.grid.point(j);
            if (std::abs(f.values[j]) > 1.5 * std::abs(env(x)) + 1e-9 * scale)
                throw std::invalid_argument(
                    "TransformInput: sampled tail exceeds the declared envelope");
        }
    };
    check_side(envelope_left, 0, tail);
    check_side(envelope_right, n - tail, n);
}

SampledFunction hilbert0(const TransformInput& in, HilbertRoute route, ConvRoute conv) {
    in.validate();
    if (in.growth != GrowthClass::integrable_x1)
        throw std::invalid_argument("hilbert0: requires an <x>^-1-integrable input");
    const Grid& g = in.f.grid;
    if (route == HilbertRoute::spectral) {
        SampledFunction F = fourier(in.f);
        for (std::size_t k = 0; k < F.size(); ++k)
            F.values[k] *= cplx(0.0, -sgn(F.grid.point(k)));
        SampledFunction back = inverse_fourier(F, g.x_min);
        back.values.resize(g.count);
        return SampledFunction(g, std::move(back.values));
    }
    const KernelTable kt = hilbert_pv_cells(g.step, g.count);
    std::vector<cplx> out = convolve(in.f.values, kt, conv);
    add_pv_derivative_correction(out, in);
    auto kxy = [](double x, double y) {
        const double u = x - y;
        return u == 0.0 ? 0.0 : 1.0 / (kPi * u);
    };
    auto Kx = [](double x, double y) { return -std::log(std::abs(x - y) + 1e-300) / kPi; };
    apply_jump_corrections(out, in, Kx, 256);
    add_tails(out, g, in, kxy, 0.0, "hilbert0");
    return SampledFunction(g, std::move(out));
}

double hilbert0_route_gap(const TransformInput& in, double tol, bool check) {
    SampledFunction a = hilbert0(in, HilbertRoute::spectral);
    SampledFunction b = hilbert0(in, HilbertRoute::pv_quadrature);
    const std::size_t n = a.size();
    double gap = 0.0;
    for (std::size_t j = n / 4; j < 3 * n / 4; ++j)
        gap = std::max(gap, std::abs(a.values[j] - b.values[j]));
    if (check && gap > tol) {
        std::ostringstream os;
        os << "hilbert0: spectral and pv routes disagree by " << gap << " > " << tol;
        throw std::runtime_error(os.str());
    }
    return gap;
}

SampledFunction poisson(const TransformInput& in, double t, ConvRoute conv) {
    in.validate();
    if (!(t > 0.0)) throw std::invalid_argument("poisson: t must be > 0");
    const Grid& g = in.f.grid;
    const KernelTable kt = poisson_cells(t, g.step, g.count);
    std::vector<cplx> out = convolve(in.f.values, kt, conv);
    auto kxy = [t](double x, double y) {
        const double u = x - y;
        return t / (kPi * (u * u + t * t));
    };
    auto Kx = [t](double x, double y) { return -std::atan((x - y) / t) / kPi; };
    apply_jump_corrections(out, in, Kx, 256);
    add_tails(out, g, in, kxy, 0.01, "poisson");
    return SampledFunction(g, std::move(out));
}

SampledFunction conj_poisson(const TransformInput& in, double t, ConvRoute conv) {
    in.validate();
    if (!(t > 0.0)) throw std::invalid_argument("conj_poisson: t must be > 0");
    if (in.growth == GrowthClass::bounded)
        throw std::invalid_argument("conj_poisson: requires an <x>^-1-integrable input");
    const Grid& g = in.f.grid;
    const KernelTable kt = conj_poisson_cells(t, g.step, g.count);
    std::vector<cplx> out = convolve(in.f.values, kt, conv);
    auto kxy = [t](double x, double y) {
        const double u = x - y;
        return u / (kPi * (u * u + t * t));
    };
    auto Kx = [t](double x, double y) {
        const double u = x - y;
        return -0.5 / kPi * std::log(u * u + t * t);
    };
    apply_jump_corrections(out, in, Kx, 256);
    add_tails(out, g, in, kxy, 0.0, "conj_poisson");
    return SampledFunction(g, std::move(out));
}

SampledFunction hilbert_kober(const TransformInput& in, ConvRoute conv) {
    in.validate();
    const Grid& g = in.f.grid;
    const KernelTable kt = hilbert_pv_cells(g.step, g.count);
    std::vector<cplx> out = convolve(in.f.values, kt, conv);
    add_pv_derivative_correction(out, in);
    const cplx second = kober_second_term(in.f)[0];
    for (auto& z : out) z += second;
    // combined kernel for tails and jump repair (decays like y^-2)
    auto kxy = [](double x, double y) {
        const double u = x - y;
        const double pvpart = u == 0.0 ? 0.0 : 1.0 / u;
        return (pvpart + y / (y * y + 1.0)) / kPi;
    };
    auto Kx = [](double x, double y) {
        return (-std::log(std::abs(x - y) + 1e-300) + 0.5 * std::log1p(y * y)) / kPi;
    };
    apply_jump_corrections(out, in, Kx, 256);
    add_tails(out, g, in, kxy, 0.01, "hilbert_kober");
    return SampledFunction(g, std::move(out));
}

SampledFunction conj_poisson_kober(const TransformInput& in, double t, ConvRoute conv) {
    in.validate();
    if (!(t > 0.0)) throw std::invalid_argument("conj_poisson_kober: t must be > 0");
    const Grid& g = in.f.grid;
    const KernelTable kt = conj_poisson_cells(t, g.step, g.count);
    std::vector<cplx> out = convolve(in.f.values, kt, conv);
    const cplx second = kober_second_term(in.f)[0];
    for (auto& z : out) z += second;
    auto kxy = [t](double x, double y) {
        const double u = x - y;
        return (u / (u * u + t * t) + y / (y * y + 1.0)) / kPi;
    };
    auto Kx = [t](double x, double y) {
        const double u = x - y;
        return (-0.5 * std::log(u * u + t * t) + 0.5 * std::log1p(y * y)) / kPi;
    };
    apply_jump_corrections(out, in, Kx, 256);
    add_tails(out, g, in, kxy, 0.01, "conj_poisson_kober");
    return SampledFunction(g, std::move(out));
}

KoberConstant ct_constant(const TransformInput& in, double t) {
    in.validate();
    if (!(t > 0.0)) throw std::invalid_argument("ct_constant: t must be > 0");
    const Grid& g = in.f.grid;
    auto weight = [t](double x) {
        return -x * t * (t + 2.0) / ((x * x + 1.0) * (x * x + (t + 1.0) * (t + 1.0)));
    };
    std::vector<cplx> integ(g.count);
    for (std::size_t j = 0; j < g.count; ++j) integ[j] = in.f.values[j] * weight(g.point(j));
    SampledFunction sf(g, std::move(integ));
    TailModel tails;
    if (in.envelope_right)
        tails.right = [&, t](double y) { return in.envelope_right(y) * weight(y); };
    if (in.envelope_left)
        tails.left = [&, t](double y) { return in.envelope_left(y) * weight(y); };
    const cplx v = integrate_with_tails(sf, tails);
    KoberConstant k;
    k.value = v.real();
    return k;
}

}  // namespace bmc
