#pragma once

#include <cmath>

namespace frns::detail {

// t^e for t > 0, with a multiplication chain when e is a small integer
// (the common exponents 2, 3, 4 dominate solver time otherwise).
inline double power(double t, double e)
{
    if (e == std::floor(e) && e >= 0.0 && e <= 16.0) {
        auto k = static_cast<int>(e);
        double base = t, acc = 1.0;
        while (k > 0) {
            if (k & 1)
                acc *= base;
            base *= base;
            k >>= 1;
        }
        return acc;
    }
    return std::pow(t, e);
}

} // namespace frns::detail
