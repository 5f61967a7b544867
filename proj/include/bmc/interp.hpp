#pragma once

#include "bmc/grid.hpp"

#include <algorithm>

namespace bmc {

// 4-point Lagrange cubic on a uniform grid; clamps to the grid interior.
inline double cubic_interp(const Grid& g, const std::vector<double>& v, double x) {
    const double pos = (x - g.x_min) / g.step;
    const auto n = static_cast<long long>(v.size());
    long long j = static_cast<long long>(std::floor(pos));
    j = std::clamp<long long>(j, 1, n - 3);
    const double u = pos - static_cast<double>(j);
    const double p0 = v[static_cast<std::size_t>(j - 1)];
    const double p1 = v[static_cast<std::size_t>(j)];
    const double p2 = v[static_cast<std::size_t>(j + 1)];
    const double p3 = v[static_cast<std::size_t>(j + 2)];
    return (-u * (u - 1.0) * (u - 2.0) / 6.0) * p0 + ((u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0) * p1 +
           (-(u + 1.0) * u * (u - 2.0) / 2.0) * p2 + ((u + 1.0) * u * (u - 1.0) / 6.0) * p3;
}

}  // namespace bmc
