#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace bmc {

using cplx = std::complex<double>;

// Uniform abscissa grid: points are x_min + j*step, j = 0..count-1.
// point(j) must always be computed by this exact expression so that grids
// reconstructed from (x_min, step, count) are bit-identical.
struct Grid {
    double x_min = 0.0;
    double step = 1.0;
    std::size_t count = 2;

    Grid() = default;
    Grid(double x_min_, double step_, std::size_t count_)
        : x_min(x_min_), step(step_), count(count_) {
        if (!(step > 0.0)) throw std::invalid_argument("Grid: step must be > 0");
        if (count < 2) throw std::invalid_argument("Grid: count must be >= 2");
    }

    double point(std::size_t j) const { return x_min + static_cast<double>(j) * step; }
    double x_max() const { return point(count - 1); }
    double span() const { return step * static_cast<double>(count); }

    // Index of the sample nearest to x (clamped to the grid).
    std::size_t nearest(double x) const {
        double p = (x - x_min) / step;
        if (p <= 0.0) return 0;
        auto j = static_cast<std::size_t>(p + 0.5);
        return j >= count ? count - 1 : j;
    }

    bool operator==(const Grid& o) const {
        return x_min == o.x_min && step == o.step && count == o.count;
    }
};

// Dual grid under the FFT pairing: step_freq * step_space * count = 1.
struct FrequencyGrid {
    double xi_min = 0.0;
    double step = 1.0;
    std::size_t count = 2;

    double point(std::size_t k) const { return xi_min + static_cast<double>(k) * step; }
    Grid as_grid() const { return Grid(xi_min, step, count); }
};

struct SampledFunction {
    Grid grid;
    std::vector<cplx> values;

    SampledFunction() = default;
    SampledFunction(Grid g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.count)
            throw std::invalid_argument("SampledFunction: values length != grid count");
    }

    std::size_t size() const { return values.size(); }

    bool all_finite() const {
        for (const auto& z : values)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    void require_finite(const char* who) const {
        if (!all_finite())
            throw std::invalid_argument(std::string(who) + ": non-finite samples");
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& z : values) m = std::max(m, std::abs(z));
        return m;
    }

    double norm_l2() const;  // sqrt(step * sum |v|^2)
};

SampledFunction sample_real(const Grid& g, const std::function<double(double)>& f);
SampledFunction sample_complex(const Grid& g, const std::function<cplx(double)>& f);

}  // namespace bmc
