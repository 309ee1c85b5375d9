#include <algorithm>
#include <cmath>

#include "frns/solver.hpp"

namespace frns {

namespace {

Grid sstar_grid(const FracParams& frac, const SStarOptions& options)
{
    std::size_t n = options.points_per_dim;
    if (n == 0)
        n = frac.n_dim == 1 ? (std::size_t{1} << 20) : 2048;
    return Grid(frac.n_dim, n, options.half_length);
}

} // namespace

double rayleigh_quotient(const Field& u, const KernelTable& massless, double s)
{
    const double n = u.grid.n_dim();
    const double crit = 2.0 * n / (n - 2.0 * s);
    const double seminorm = massless.spectral_sum(massless.forward(u), massless.symbol());
    double acc = 0.0;
    for (double v : u.values)
        acc += std::pow(std::abs(v), crit);
    const double lp = std::pow(acc * u.grid.cell_volume(), 2.0 / crit);
    if (!(lp > 0.0))
        throw NumericalError("rayleigh_quotient: zero field");
    return sigma_s(s) * seminorm / lp;
}

std::vector<double> default_rho_values(const FracParams& frac, const SStarOptions& options)
{
    const Grid grid = sstar_grid(frac, options);
    const double lo = 8.0 * grid.spacing();
    const double hi = grid.half_length() * std::pow(0.03, 1.0 / (frac.n_dim - 2.0 * frac.s));
    std::vector<double> rho;
    for (double r = lo; r <= hi * (1.0 + 1e-12); r *= std::sqrt(2.0))
        rho.push_back(r);
    return rho;
}

SStarResult estimate_s_star(const FracParams& frac, const std::vector<double>& rho_values,
                            const SStarOptions& options)
{
    if (!(frac.n_dim > 2.0 * frac.s))
        throw ParameterError("estimate_s_star: requires N > 2s");
    if (!(frac.s > 0.0 && frac.s < 1.0))
        throw ParameterError("estimate_s_star: s must lie in (0,1)");
    if (rho_values.empty())
        throw ParameterError("estimate_s_star: empty rho list");

    const Grid grid = sstar_grid(frac, options);
    const KernelTable massless = build_fractional_laplacian(grid, frac.s);
    const double e = 0.5 * (frac.n_dim - 2.0 * frac.s);

    SStarResult res;
    res.formula = sobolev_trace_constant(frac.n_dim, frac.s);
    for (double rho : rho_values) {
        if (!(rho > 0.0))
            throw ParameterError("estimate_s_star: rho must be positive");
        Field u = sample(grid, [&](const Point& x) {
            const double r2 = x[0] * x[0] + (grid.n_dim() == 1 ? 0.0 : x[1] * x[1]);
            return std::pow(rho, e) / std::pow(r2 + rho * rho, e);
        });
        const double floor = *std::min_element(u.values.begin(), u.values.end());
        for (double& v : u.values)
            v = std::max(v - floor, 0.0);
        res.rho.push_back(rho);
        res.quotient.push_back(rayleigh_quotient(u, massless, frac.s));
    }
    const auto it = std::min_element(res.quotient.begin(), res.quotient.end());
    const auto idx = static_cast<std::size_t>(it - res.quotient.begin());
    res.min_quotient = *it;
    res.rho_at_min = res.rho[idx];
    res.edge_warning = res.quotient.size() > 1 && (idx == 0 || idx + 1 == res.quotient.size());
    return res;
}

} // namespace frns
