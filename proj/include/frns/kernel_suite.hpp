#pragma once

#include <string>
#include <vector>

#include "frns/specfun.hpp"

namespace frns {

struct KernelCheck {
    std::string name;
    double computed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    // Relative error unless the expected value is 0, then absolute.
    double error = 0.0;
    bool passed = false;
};

// Max over a log-spaced grid y in [y_lo, y_hi] of
// |theta'' + (1-2s)/y theta' - theta| / theta, derivatives by Richardson-
// extrapolated central differences in ln y.
double theta_ode_residual(double s, double y_lo = 1e-3, double y_hi = 20.0, int points = 200);

// Kernel identities, the profile ODE, kappa_s = sigma_s, the conormal limit
// on a Fourier mode, and the resolvent against the Bessel kernel.
// sigma_scale multiplies the sigma_s used for expected values (1 in normal use).
std::vector<KernelCheck> run_kernel_suite(const FracParams& params, double sigma_scale = 1.0);

} // namespace frns
