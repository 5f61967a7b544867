#pragma once

#include "bmc/moment_method.hpp"

#include <string>

namespace bmc {

// Control operator coefficient b_k = <b, e_k>_{H^-1} = -(Delta^-1 e_k)'(0);
// with the H^-1-normalized basis this is sqrt(2) for every k.
double b_coefficient(std::size_t k);

struct InitialData {
    std::vector<cplx> a;  // modal coefficients of y0

    double norm() const;
};

struct ControlResult {
    std::vector<cplx> u;           // on the family time grid
    Grid time_grid;
    std::vector<cplx> residuals;   // final-state coefficients r_k
    double cost = 0.0;             // ||u||_2 / ||a||_2 (undefined -> 0, flagged)
    bool cost_defined = false;
    double certified_exponent = 0.0;  // 3^{3/4}(1+eps)/(4T(1-eps)^2)
};

// u = -sum_l a_l/b_l psi_l, with moment residuals on the first K_check modes.
ControlResult synthesize_control(const InitialData& a, const BiorthogonalFamily& fam,
                                 std::size_t K_check = 0);

// r_k = e^{-i lambda_k T}(a_k + b_k int_0^T e^{i lambda_k s} u(s) ds): the k-th
// final-state coefficient of the boundary-controlled Schroedinger evolution.
std::vector<cplx> moment_residuals(const std::vector<cplx>& u, const InitialData& a,
                                   const BiorthogonalFamily& fam, std::size_t K_check);

// Largest singular value of a -> u on the first K modes via the Gram matrix
// G_lm = <psi_l, psi_m>/(b_l b_m) (cyclic Jacobi on the Hermitian embedding).
double empirical_cost(const BiorthogonalFamily& fam, std::size_t K);

// Independent maximizer: power iteration on the same Gram matrix.
double empirical_cost_power(const BiorthogonalFamily& fam, std::size_t K,
                            std::uint64_t seed = 1, int iters = 400);

struct CostRow {
    double T = 0.0;
    double epsilon = 0.0;
    std::size_t K = 0;
    double cost = 0.0;
    double T_log_cost = 0.0;
    double certified_ceiling = 0.0;  // 3^{3/4}(1+eps)/(4(1-eps)^2)
    double biorth_dev = 0.0;
    double support_leakage = 0.0;
    std::string error;  // empty when the row succeeded
};

struct CostCurve {
    std::vector<CostRow> rows;
    std::string to_csv() const;
    std::string to_json() const;  // carries schema_version
};

struct SweepOptions {
    FamilyOptions family;
    ParticularOptions multiplier;  // variant is forced on
    std::function<void(const CostRow&)> row_sink;  // flushed per row (resume support)
    std::vector<double> skip_T;    // rows already present in the output
};

// Per T (decreasing): build the eps-variant multiplier, the family, and the
// empirical cost; failures are recorded in the row and the sweep continues.
CostCurve cost_sweep(const std::vector<double>& T_list, double eps, std::size_t K,
                     const SweepOptions& opts = {});

// Largest eigenvalue of the N x N matrix 1/(1+|n-m|) (power iteration).
double hilbert_form_check(std::size_t N);

}  // namespace bmc
