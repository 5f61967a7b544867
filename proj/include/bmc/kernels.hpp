#pragma once

#include "bmc/grid.hpp"

namespace bmc {

// Table of per-cell kernel integrals C_d = int_{(d-1/2)h}^{(d+1/2)h} k(u) du for
// offsets d = -(n-1) .. n-1. With f constant per cell, sum_j f_j C_{i-j}
// approximates int k(x_i - y) f(y) dy to O(h^2) for smooth f.
struct KernelTable {
    std::size_t n = 0;  // grid length the table was built for
    std::vector<double> c;  // size 2n-1, offset d stored at c[d + n - 1]

    double at(long long d) const { return c[static_cast<std::size_t>(d + static_cast<long long>(n) - 1)]; }
};

// Cell integrals of the Poisson kernel P_t(u) = t/(pi(u^2+t^2)).
KernelTable poisson_cells(double t, double h, std::size_t n);
// Conjugate Poisson kernel Q_t(u) = u/(pi(u^2+t^2)).
KernelTable conj_poisson_cells(double t, double h, std::size_t n);
// Principal-value Hilbert kernel 1/(pi u); the d = 0 cell vanishes by symmetry.
KernelTable hilbert_pv_cells(double h, std::size_t n);
// Point-sampled pv rule 1/(pi d h) * h with the center excluded (the
// symmetric-pair quadrature); kept as the reference flavour of the pv route.
KernelTable hilbert_pv_points(double h, std::size_t n);
// Cell integrals of -log|u| (used by the outer-phase machinery).
KernelTable neglog_cells(double h, std::size_t n);

enum class ConvRoute { serial, omp, fft, automatic };

// conv_i = sum_j f_j C_{i-j}. serial/omp are direct O(n^2) sums; fft is the
// O(n log n) equivalent.
std::vector<double> convolve(const std::vector<double>& f, const KernelTable& k,
                             ConvRoute route = ConvRoute::automatic);

std::vector<cplx> convolve(const std::vector<cplx>& f, const KernelTable& k,
                           ConvRoute route = ConvRoute::automatic);

}  // namespace bmc
