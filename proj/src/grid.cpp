#include "bmc/grid.hpp"

#include <cmath>

namespace bmc {

double SampledFunction::norm_l2() const {
    double s = 0.0;
    for (const auto& z : values) s += std::norm(z);
    return std::sqrt(grid.step * s);
}

SampledFunction sample_real(const Grid& g, const std::function<double(double)>& f) {
    std::vector<cplx> v(g.count);
    for (std::size_t j = 0; j < g.count; ++j) v[j] = cplx(f(g.point(j)), 0.0);
    return SampledFunction(g, std::move(v));
}

SampledFunction sample_complex(const Grid& g, const std::function<cplx(double)>& f) {
    std::vector<cplx> v(g.count);
    for (std::size_t j = 0; j < g.count; ++j) v[j] = f(g.point(j));
    return SampledFunction(g, std::move(v));
}

}  // namespace bmc
