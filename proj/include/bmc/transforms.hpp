#pragma once

#include "bmc/grid.hpp"
#include "bmc/kernels.hpp"

#include <optional>

namespace bmc {

// Membership class of the input: how fast |f| is allowed to grow/decay, which
// decides convergence of each transform and drives the analytic tail
// corrections beyond the grid.
enum class GrowthClass {
    integrable_x1,  // f in L^1(<x>^-1 dx)
    integrable_x2,  // f in L^1(<x>^-2 dx)
    bounded,        // bounded, mean-zero oscillation assumed for tails
};

struct JumpSpec {
    double x = 0.0;      // abscissa of the discontinuity
    double left = 0.0;   // one-sided limits
    double right = 0.0;
};

struct TransformInput {
    SampledFunction f;
    GrowthClass growth = GrowthClass::integrable_x2;
    // |f| models beyond the grid ends (value model, not just a bound); null
    // means the function is negligible there.
    std::function<double(double)> envelope_right;
    std::function<double(double)> envelope_left;
    std::vector<JumpSpec> jumps;

    // checks the declared envelope against the sampled tails (outer 10%)
    void validate() const;
};

struct KoberConstant {
    double value = 0.0;
};

enum class HilbertRoute { spectral, pv_quadrature };

// Standard Hilbert transform H_0 f = f * pv 1/(pi x).
SampledFunction hilbert0(const TransformInput& in, HilbertRoute route,
                         ConvRoute conv = ConvRoute::automatic);

// Interior sup distance between the two hilbert0 routes (diagnostic; throws
// beyond tol per the module contract when check = true).
double hilbert0_route_gap(const TransformInput& in, double tol = 1e-3, bool check = true);

// Poisson transform P_t * f with analytic tail correction.
SampledFunction poisson(const TransformInput& in, double t,
                        ConvRoute conv = ConvRoute::automatic);

// Conjugate Poisson transform Q_t * f.
SampledFunction conj_poisson(const TransformInput& in, double t,
                             ConvRoute conv = ConvRoute::automatic);

// Kober-modified Hilbert transform: combined kernel 1/(x-y) + y/(y^2+1),
// never split (each half may diverge on <x>^-2 inputs).
SampledFunction hilbert_kober(const TransformInput& in,
                              ConvRoute conv = ConvRoute::automatic);

// Kober-modified conjugate Poisson transform.
SampledFunction conj_poisson_kober(const TransformInput& in, double t,
                                   ConvRoute conv = ConvRoute::automatic);

// C_t(f) = -int x t(t+2) f(x) / ((x^2+1)(x^2+(t+1)^2)) dx.
KoberConstant ct_constant(const TransformInput& in, double t);

}  // namespace bmc
