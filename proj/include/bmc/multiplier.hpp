#pragma once

#include "bmc/grid.hpp"
#include "bmc/kernels.hpp"
#include "bmc/weights.hpp"

#include <string>

namespace bmc {

struct MultiplierRequest {
    double sigma = 0.1;        // support length of psi
    double sigma_prime = 0.08; // Lipschitz budget of H(Omega)'; < sigma
    LogHolderWeight weight;
    bool strict_regime = false;  // escalate the sigma < 1/10 warning to an error
};

struct BuildOptions {
    double x_half = 2048.0;     // evaluation grid is [-x_half, x_half)
    std::size_t count = 1u << 17;
    double pad = 256.0;         // extra integration margin absorbed by H(s)
    std::string conv = "auto";  // kernel route: auto|serial|omp|fft
};

// The atomized weight of the effective-multiplier construction.
struct WellPreparedWeight {
    double A = 0.0;
    double sigma = 0.0, sigma_prime = 0.0;
    Grid grid;                          // evaluation grid
    std::vector<double> omega0;         // omega / (x^2+A^2)^3
    std::vector<double> s0, s, M;       // phase ramp, its reduction, M = H(s)
    std::vector<long long> k;           // floor indices (monotone)
    std::vector<double> log_omega_tilde;  // log of m * omega0 (kept in log scale)
    std::vector<double> omega_tilde;
    std::vector<double> jump_x;         // atomization abscissas
    double c_const = 0.0;               // P_1(s)(0)
    double h_omega0_sup = 0.0;          // measured sup |H(Omega0)'|

    struct Diag {
        double s0_min_increment = 0.0;  // monotonicity margin of s0
        double mbd1_margin = 0.0;       // min M(x) + 1/2 + 3 log(|x|+2)
        double mbd2_right = 0.0;        // sup |M| on (1/2, 1)
        double mbd2_left = 0.0;         // sup |M| on (-1, -1/2)
        double omega_tilde_ratio = 0.0; // max omega_tilde (x^2+A^2) / omega
    } diag;
};

enum class LowerInterval { left, right, none };

struct MultiplierResult {
    double sigma = 0.0, sigma_prime = 0.0, t = 0.0, A = 0.0;
    SampledFunction psi;        // time side
    SampledFunction spectrum;   // F psi on the multiplier grid
    double support_leakage = 0.0;
    bool upper_ok = false;
    double upper_margin = 0.0;  // max |F psi| / omega_target
    LowerInterval lower_interval = LowerInterval::none;
    double lower_constant = 0.0;
    double lower_constant_other = 0.0;
    double certified_factor = 0.0;
    bool conjugated = false;    // time-reflection branch taken
    bool regime_warning = false;
    double renorm_scale = 0.0;  // sup |F psi| (for relative thresholds)

    // spectrum-evaluator state
    Grid grid;
    std::vector<double> hfun;   // (-1)^k omega_tilde, smooth through the dips
    double phase_c = 0.0;       // P_1(s)(0)

    std::string to_json() const;
};

// F psi at arbitrary abscissae: cubic interpolation of the smooth carrier plus
// the analytic phase; out-of-grid lookups fall back to the decay envelope of
// the target weight with the boundary phase frozen.
class SpectrumEvaluator {
  public:
    SpectrumEvaluator(const MultiplierResult& r, std::function<double(double)> envelope);
    cplx operator()(double x) const;
    double modulus(double x) const;

  private:
    const MultiplierResult& r_;
    std::function<double(double)> env_;
    double edge_lo_, edge_hi_;
};

// Theorem-2.2 preparation: from a smoothed weight with sup |H(P_t Omega)'| <=
// pi sigma' build omega0, the monotone ramp s0, the atomization s, k, M = H(s)
// and omega_tilde, with every bound of the construction checked samplewise.
WellPreparedWeight prepare(const MultiplierRequest& req, const SmoothedWeight& sm,
                           const BuildOptions& opts = {});

// Outer-function synthesis: spectrum G = omega_tilde e^{i H(Omega_tilde)}
// (phase via the inversion identity H(M) = -s + P_1(s)(0)), psi by inverse
// Fourier transform; the Fourier direction is fixed by the support test.
MultiplierResult synthesize_psi(const WellPreparedWeight& wp, double sigma,
                                const LogHolderWeight& target,
                                const SmoothedWeight& sm);

// Full generic pipeline (goodt -> smooth -> prepare -> synthesize).
MultiplierResult build_multiplier(const MultiplierRequest& req,
                                  const BuildOptions& opts = {});

struct ParticularOptions : BuildOptions {
    // eps-variant of section 3: weight omega_eps, support [0, T(1-eps)]
    bool variant = false;
};

// Theorem-2.5 pipeline for the section-2.4 weight (closed forms throughout).
MultiplierResult build_multiplier_particular(double T, double eps,
                                             const ParticularOptions& opts = {});

namespace detail {

// out_i += sum_J -log|x_i - x_J| (hot kernel; serial flavour for tests/bench).
void atom_log_sum(const Grid& g, const std::vector<double>& jumps, std::vector<double>& out,
                  bool use_omp);

// H(s) for the atomized phase s (jumps of -pi at `jumps`, smooth slope s0p)
// by integration by parts against K_x(y) = -log|x-y| + log(1+y^2)/2.
std::vector<double> hilbert_of_atomized(const Grid& g, const std::vector<double>& s,
                                        const std::vector<double>& s0p,
                                        const std::vector<double>& jumps,
                                        ConvRoute route = ConvRoute::automatic);

}  // namespace detail

}  // namespace bmc
