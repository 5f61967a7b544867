#pragma once

#include "bmc/grid.hpp"
#include "bmc/multiplier.hpp"

#include <string>

namespace bmc {

// Dirichlet-Laplacian eigenvalue ladder: lambda_k = k^2 pi^2, mu_k = pi k^2/2
// (so that e^{i lambda_k t} = e^{2 pi i mu_k t}).
struct ModeLadder {
    std::size_t count = 0;
    std::vector<double> lambdas;
    std::vector<double> mus;
};
ModeLadder make_ladder(std::size_t K);

inline double mu_of(std::size_t k) {
    return std::numbers::pi * static_cast<double>(k) * static_cast<double>(k) / 2.0;
}
inline double lambda_of(std::size_t k) {
    const auto kk = static_cast<double>(k);
    return kk * kk * std::numbers::pi * std::numbers::pi;
}

// Canonical fraction P_l(x) = 2 (-1)^{l+1} mu_l sinh(sqrt(2 pi x))/(sqrt(2 pi x)(x+mu_l)),
// with the sin branch for x < 0, a power series near 0, and the
// removable-singularity form near x = -mu_l.
double eval_pl(std::size_t l, double x);

// log|P_l| for abscissae where sinh would overflow; flagged variant.
struct PlLogValue {
    double log_abs = 0.0;
    int sign = 1;
    bool log_scale = false;  // true when the plain value overflows
};
PlLogValue eval_pl_log(std::size_t l, double x);

// Shifted, normalized multiplier factor of the family:
// g_l(x) = Fpsi(x - m + mu_l)/Fpsi(m) * i(e^{-2 i pi eps T (x+mu_l)} - 1)/(2 pi eps T (x+mu_l)).
cplx eval_gl(std::size_t l, double x, const SpectrumEvaluator& spec, double m_shift,
             double eps, double T);

struct FamilyOptions {
    double wl_min = 600.0;   // left window floor
    double wl_A = 5.0;       // left window in units of A
    double wr = 700.0;       // right window
    double dxi = 0.0625;     // frequency step of the sampled spectra
    std::size_t pad_exp = 19;  // FFT length 2^pad_exp (time-side resolution)
};

struct BiorthogonalFamily {
    double T = 0.0;
    double eps = 0.0;
    double m_shift = 0.25;
    std::size_t K = 0;
    Grid time_grid;                      // common [0, T] grid
    std::vector<std::vector<cplx>> psi;  // psi_l samples on time_grid (l = 1..K)
    Grid xi_grid;                        // live spectral window
    std::vector<std::vector<cplx>> spectra;  // sampled g_l P_l (renormalized)
    std::vector<double> support_leakage;     // per l, relative L2 outside [0, T]
    std::vector<cplx> renorm;                // measured g_l(-mu_l) before renormalization
    double psi_scale_max = 0.0;

    std::string to_json(std::size_t max_rows = 0) const;  // bundle export
};

// Sample g_l P_l for l = 1..K, inverse-transform to the common time grid, and
// renormalize each spectrum by its measured value at -mu_l so that the
// diagonal interpolation target is exactly 1.
BiorthogonalFamily build_family(double T, double eps, std::size_t K,
                                const MultiplierResult& mult, const FamilyOptions& opts = {});

struct BiorthReport {
    std::vector<cplx> matrix;  // row-major K_check x K_check
    double max_deviation = 0.0;
    double diag_deviation = 0.0;
};

// M_kl = int_0^T e^{2 pi i mu_k t} psi_l(t) dt by trapezoid quadrature.
BiorthReport biorth_matrix(const BiorthogonalFamily& fam, std::size_t K_check);

// Frequency-side oracle: cubic interpolation of the sampled spectra at -mu_k.
BiorthReport biorth_matrix_freq_oracle(const BiorthogonalFamily& fam, std::size_t K_check);

// CSV export of a biorthogonality matrix (re/im columns).
std::string biorth_matrix_csv(const BiorthReport& rep, std::size_t K_check);

}  // namespace bmc
