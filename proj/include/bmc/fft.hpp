#pragma once

#include "bmc/grid.hpp"

#include <optional>

namespace bmc {

// In-place radix-2 DFT, sign = -1 for e^{-2pi i jk/N} (forward), +1 for inverse
// (unnormalized). n must be a power of two.
void dft_pow2(std::vector<cplx>& a, int sign);

bool is_pow2(std::size_t n);
std::size_t next_pow2(std::size_t n);

// Continuous Fourier transform F f(xi) = int e^{-2pi i x xi} f(x) dx sampled on
// the dual grid (xi_min defaults to -1/(2 step)). Non power-of-two inputs are
// zero-padded on the right; this is rejected unless the endpoint samples are
// below pad_tol * max|f|.
SampledFunction fourier(const SampledFunction& f,
                        std::optional<double> xi_min = std::nullopt,
                        double pad_tol = 1e-9);

// Inverse transform int e^{+2pi i x xi} g(xi) d xi on the dual grid
// (x_min defaults to -1/(2 step)).
SampledFunction inverse_fourier(const SampledFunction& g,
                                std::optional<double> x_min = std::nullopt,
                                double pad_tol = 1e-9);

// Dual frequency grid of a space grid (count unchanged; must be pow2 for FFTs).
FrequencyGrid dual_grid(const Grid& g);

}  // namespace bmc
