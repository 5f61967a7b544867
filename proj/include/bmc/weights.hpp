#pragma once

#include "bmc/grid.hpp"

#include <optional>
#include <string>

namespace bmc {

// A positive bounded weight with log-Hoelder certificate:
// |Omega(x) - Omega(y)| <= K0 |x-y|^alpha, Omega = -log(omega).
struct LogHolderWeight {
    std::function<double(double)> Omega;
    double K0 = 0.0;
    double alpha = 0.5;           // in (0,1)
    double omega_bound = 1.0;     // essential bound of omega

    // growth model of Omega used for quadrature tails (value model for y
    // beyond any finite grid); null means Omega is negligible there
    std::function<double(double)> growth_right;
    std::function<double(double)> growth_left;

    struct ClosedForms {
        // (t, x) -> value
        std::function<double(double, double)> poisson_of_Omega;
        std::function<double(double, double)> conj_poisson_kober_of_Omega;
        std::function<double(double, double)> H_poisson_derivative;
    };
    std::optional<ClosedForms> closed_forms;

    double omega(double x) const { return std::exp(-Omega(x)); }
};

struct HolderReport {
    double max_ratio = 0.0;   // max |dOmega| / (K0 |dx|^alpha)
    bool pass = false;
    double worst_x = 0.0, worst_y = 0.0;
};

HolderReport verify_holder(const LogHolderWeight& w, std::size_t pairs, double span,
                           std::uint64_t seed = 12345);

// t = (K0 / (pi sigma' cos(pi alpha/2)))^{1/(1-alpha)}; 0 when K0 == 0
// (degenerate, nothing to smooth).
double smoothing_time(double K0, double alpha, double sigma_prime);

// The smoothed log-weight P_t Omega with its certified bounds and the callables
// the multiplier pipeline consumes.
struct SmoothedWeight {
    double t = 0.0;
    SampledFunction POmega;       // sampled record on the build grid
    double error_bound = 0.0;     // sup |P_t Omega - Omega| certificate
    double deriv_bound = 0.0;     // sup |H(P_t Omega)'| certificate
    double deriv_sup = 0.0;       // measured/sharp sup actually used downstream
    double ct = 0.0;              // C_t(Omega)

    std::function<double(double)> POmega_fn;
    std::function<double(double)> HPOmega_fn;        // tilde Q_t Omega + C_t
    std::function<double(double)> HPOmega_deriv_fn;
};

// Smooth a weight at height t on the given grid. Uses the closed forms when the
// weight carries them, the quadrature transforms otherwise.
SmoothedWeight smooth(const LogHolderWeight& w, double t, const Grid& grid);

// The section-2.4 weight omega = exp(-sqrt(2 pi x)) (x > 0), 1 otherwise,
// with all closed forms installed.
LogHolderWeight particular_weight();

// omega_eps with Omega_eps = (1+eps) Omega.
LogHolderWeight epsilon_weight(double eps);

// t = 3 sqrt(3) / (16 pi (T(1-eps))^2).
double particular_smoothing_time(double T, double eps);

// JSON descriptor: {"kind": "particular"|"particular_eps"|"table",
//                   "epsilon"?, "table"?: [[x, Omega], ...], "K0", "alpha"}
LogHolderWeight weight_from_json(const std::string& json_text);

}  // namespace bmc
