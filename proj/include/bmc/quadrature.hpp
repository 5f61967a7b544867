#pragma once

#include "bmc/grid.hpp"

namespace bmc {

// Trapezoid over the grid span.
cplx integrate(const SampledFunction& f);

// Integral of a callable over [a, +inf) (or (-inf, a] when side < 0) on
// geometrically growing panels with Simpson's rule per panel. Stops once the
// running tail is relatively converged or the cap is reached.
double tail_integral(const std::function<double(double)>& g, double a, int side,
                     double rel_tol = 1e-10, double y_cap = 1e12);

// Trapezoid plus analytic tail corrections. The envelopes are the actual
// integrand models beyond the grid ends (nullable).
struct TailModel {
    std::function<double(double)> left;   // integrand for y <= x_min
    std::function<double(double)> right;  // integrand for y >= x_max
};
cplx integrate_with_tails(const SampledFunction& f, const TailModel& tails);

struct LogIntegralResult {
    double value = 0.0;          // trapezoid of log(omega)/(1+x^2) over [-cutoff, cutoff]
    double tail_estimate = 0.0;  // envelope-driven bound on the omitted tail mass
    bool diverged = false;       // tail estimator failed to converge
};

// Logarithmic integral of a positive weight. growth_envelope models |log omega|
// for |x| >= cutoff; pass nullptr for compactly supported log-weights.
LogIntegralResult log_integral(const SampledFunction& omega, double cutoff,
                               const std::function<double(double)>& growth_envelope,
                               double tail_tol = 1e-3);

}  // namespace bmc
