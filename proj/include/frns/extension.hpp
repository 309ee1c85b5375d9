#pragma once

#include <string>
#include <vector>

#include "frns/grid.hpp"
#include "frns/spectral_operator.hpp"

namespace frns {

// Samples of the half-space extension U(x, y) on a set of heights; slab j
// holds U(., y_levels[j]) and y_levels[0] == 0.
struct ExtensionStack {
    Grid grid;
    std::vector<double> y_levels;
    std::vector<Field> slabs;
};

// 0 followed by 48 log-spaced heights in [1e-4/m, 20/m].
std::vector<double> default_y_levels(double m);

ExtensionStack extend(const Field& u, const FracParams& params, const std::vector<double>& y_levels);
ExtensionStack extend(const Field& u, const KernelTable& table, const std::vector<double>& y_levels);

struct ConormalDiagnostics {
    int levels_used = 0;
    // Observed power of y in the leading correction, from the three smallest levels.
    double estimated_order = 0.0;
    // Relative L2 change between the full and one-order-lower extrapolants.
    double extrapolation_change = 0.0;
    bool converged = false;
};

// -lim_{y->0} y^{1-2s} dU/dy, taken as the limit of 2s (U(0) - U(y)) / y^{2s}
// (same limit by l'Hopital) and extrapolated in y.
Field conormal_derivative(const ExtensionStack& stack, const FracParams& params,
                          ConormalDiagnostics* diag = nullptr);

struct EnergyDiagnostics {
    bool resolution_warning = false;
    std::string message;
};

// Weighted Dirichlet energy  int int y^{1-2s} (|grad U|^2 + m^2 U^2) dx dy.
double extension_energy(const ExtensionStack& stack, const FracParams& params,
                        EnergyDiagnostics* diag = nullptr);
double extension_energy(const ExtensionStack& stack, const KernelTable& table,
                        EnergyDiagnostics* diag = nullptr);

// P_{s,m}(x, y) at |x| = r.
double poisson_kernel(const FracParams& params, double r, double y);
// Integral of P_{s,m}(., y) over R^N by radial quadrature.
double poisson_kernel_mass(const FracParams& params, double y, double* error_estimate = nullptr);

} // namespace frns
