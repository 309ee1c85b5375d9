#pragma once

#include <cmath>

#include "frns/grid.hpp"

namespace frns::detail {

// Minimum-image distance on the periodic box.
inline double periodic_distance(const Grid& grid, const Point& a, const Point& b)
{
    const double period = 2.0 * grid.half_length();
    auto wrap = [period](double d) { return d - period * std::round(d / period); };
    const double dx = wrap(a[0] - b[0]);
    const double dy = grid.n_dim() == 1 ? 0.0 : wrap(a[1] - b[1]);
    return std::hypot(dx, dy);
}

} // namespace frns::detail
