#include "bmc/quadrature.hpp"

#include <cmath>

namespace bmc {

cplx integrate(const SampledFunction& f) {
    f.require_finite("integrate");
    const auto& v = f.values;
    cplx s = 0.0;
    for (const auto& z : v) s += z;
    s -= 0.5 * (v.front() + v.back());
    return s * f.grid.step;
}

namespace {

double simpson_piece(const std::function<double(double)>& f, double a, double b, double fa,
                     double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

// adaptive Simpson; the integrands can be near-singular at the panel start
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson_piece(f, a, m, fa, flm, fm);
    const double right = simpson_piece(f, m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

}  // namespace

double tail_integral(const std::function<double(double)>& g, double a, int side,
                     double rel_tol, double y_cap) {
    if (!g) return 0.0;
    const double ratio = 1.35;
    double acc = 0.0;
    double lo = std::abs(a);
    if (lo < 1e-8) lo = 1e-8;
    auto ev = [&](double y) { return g(side > 0 ? y : -y); };
    double f_lo = ev(lo);
    while (lo < y_cap) {
        const double hi = lo * ratio;
        const double mid = 0.5 * (lo + hi);
        const double f_mid = ev(mid), f_hi = ev(hi);
        const double rough = simpson_piece(ev, lo, hi, f_lo, f_mid, f_hi);
        const double scale = std::max({std::abs(acc), std::abs(rough), 1e-12});
        const double piece =
            adaptive_simpson(ev, lo, hi, f_lo, f_mid, f_hi, rough, rel_tol * scale, 24);
        acc += piece;
        if (std::abs(piece) < rel_tol * (std::abs(acc) + 1e-300) && hi > 16.0 * std::abs(a))
            break;
        lo = hi;
        f_lo = f_hi;
    }
    return acc;
}

cplx integrate_with_tails(const SampledFunction& f, const TailModel& tails) {
    cplx v = integrate(f);
    if (tails.right) v += tail_integral(tails.right, f.grid.x_max(), +1);
    if (tails.left) v += tail_integral(tails.left, f.grid.x_min, -1);
    return v;
}

LogIntegralResult log_integral(const SampledFunction& omega, double cutoff,
                               const std::function<double(double)>& growth_envelope,
                               double tail_tol) {
    omega.require_finite("log_integral");
    const Grid& g = omega.grid;
    LogIntegralResult r;
    double s = 0.0;
    bool first = true;
    double prev = 0.0, prev_x = 0.0;
    for (std::size_t j = 0; j < g.count; ++j) {
        const double x = g.point(j);
        if (x < -cutoff || x > cutoff) continue;
        const double w = omega.values[j].real();
        if (!(w > 0.0)) throw std::invalid_argument("log_integral: non-positive sample");
        const double y = std::log(w) / (1.0 + x * x);
        if (!first) s += 0.5 * (prev + y) * (x - prev_x);
        prev = y;
        prev_x = x;
        first = false;
    }
    r.value = s;
    if (growth_envelope) {
        auto integrand = [&](double y) {
            return growth_envelope(y) / (1.0 + y * y);
        };
        // convergence probe: compare the tail over [cutoff, cap] against the
        // tail over [cutoff, sqrt(cap)]; a divergent envelope keeps growing
        const double t_half = tail_integral(integrand, cutoff, +1, 1e-10, 1e6) +
                              tail_integral(integrand, cutoff, -1, 1e-10, 1e6);
        const double t_full = tail_integral(integrand, cutoff, +1, 1e-10, 1e12) +
                              tail_integral(integrand, cutoff, -1, 1e-10, 1e12);
        r.tail_estimate = t_full;
        const bool not_converged =
            std::abs(t_full - t_half) > 0.5 * tail_tol * (1.0 + std::abs(t_full));
        r.diverged = not_converged || std::abs(t_full) > tail_tol * (1.0 + std::abs(r.value));
    }
    return r;
}

}  // namespace bmc
