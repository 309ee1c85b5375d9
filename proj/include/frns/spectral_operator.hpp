#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "frns/grid.hpp"
#include "frns/specfun.hpp"

namespace frns {

class RealFFT;

using Spectrum = std::vector<std::complex<double>>;

// Symbol (|k|^2 + m^2)^s sampled on the half spectrum of a Grid, with the
// transform plans needed to apply it. Immutable once built.
class KernelTable {
public:
    const Grid& grid() const { return grid_; }
    const FracParams& params() const { return params_; }
    const std::vector<double>& symbol() const { return symbol_; }
    // |k|^2 per half-spectrum entry.
    const std::vector<double>& k_squared() const { return k2_; }
    // 1 or 2: how many full-spectrum modes each half-spectrum entry stands for.
    const std::vector<double>& multiplicity() const { return weight_; }

    Spectrum forward(const Field& u) const;
    Field inverse(const Spectrum& spec) const;
    // Inverse transform of multiplier * transform(u).
    Field filter(const Field& u, const std::vector<double>& multiplier) const;
    // h^N / n_total * sum over all modes of multiplier |u_hat|^2, i.e. the
    // discrete <M u, u>.
    double spectral_sum(const Spectrum& spec, const std::vector<double>& multiplier) const;

    static KernelTable build(const Grid& grid, const FracParams& params,
                             const std::function<double(double)>& symbol_of_k2);

private:
    Grid grid_;
    FracParams params_;
    std::vector<double> symbol_;
    std::vector<double> k2_;
    std::vector<double> weight_;
    std::shared_ptr<const RealFFT> fft_;
};

KernelTable build_symbol(const Grid& grid, const FracParams& params);
// |k|^{2s}: the massless reference operator on the same grid.
KernelTable build_fractional_laplacian(const Grid& grid, double s);

Field apply_operator(const Field& u, const KernelTable& table);

struct SingularDiagnostics {
    // Largest |u(x)| * (kernel mass beyond the truncation radius).
    double tail_estimate = 0.0;
    double truncation_radius = 0.0;
};

// Principal-value singular-integral form of the operator, 1D only. The field
// is extended by zero outside the box. The excluded cell |x-y| < h is handled
// by a second-order Taylor correction, the region beyond truncation_radius by
// its kernel mass times u(x).
Field apply_operator_singular(const Field& u, const FracParams& params, double truncation_radius,
                              SingularDiagnostics* diag = nullptr);

Field solve_resolvent(const Field& mu, const KernelTable& table);

// Closed-form Green function G_{2s,m}(r) of the operator, r > 0.
double bessel_kernel(const FracParams& params, double r);

double quadratic_form(const Field& u, const KernelTable& table);

} // namespace frns
