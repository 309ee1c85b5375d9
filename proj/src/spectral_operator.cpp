#include "frns/spectral_operator.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "fft.hpp"

namespace frns {

namespace {

double wavenumber(std::size_t i, std::size_t n, double half_length)
{
    const auto j = i <= n / 2 ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(n);
    return std::numbers::pi * j / half_length;
}

void require_same_grid(const Grid& a, const Grid& b, const char* where)
{
    if (a != b)
        throw ParameterError(std::string(where) + ": grid mismatch");
}

} // namespace

KernelTable KernelTable::build(const Grid& grid, const FracParams& params,
                               const std::function<double(double)>& symbol_of_k2)
{
    KernelTable t;
    t.grid_ = grid;
    t.params_ = params;
    t.fft_ = std::make_shared<const RealFFT>(grid);

    const std::size_t n = grid.points_per_dim();
    const std::size_t half = t.fft_->half_axis();
    const std::size_t rows = grid.n_dim() == 1 ? 1 : n;
    t.symbol_.resize(t.fft_->spectrum_size());
    t.k2_.resize(t.fft_->spectrum_size());
    t.weight_.resize(t.fft_->spectrum_size());
    for (std::size_t a = 0; a < rows; ++a) {
        const double ka = grid.n_dim() == 1 ? 0.0 : wavenumber(a, n, grid.half_length());
        for (std::size_t b = 0; b < half; ++b) {
            const double kb = wavenumber(b, n, grid.half_length());
            const std::size_t idx = a * half + b;
            t.k2_[idx] = ka * ka + kb * kb;
            t.symbol_[idx] = symbol_of_k2(t.k2_[idx]);
            t.weight_[idx] = (b == 0 || b == n / 2) ? 1.0 : 2.0;
        }
    }
    return t;
}

Spectrum KernelTable::forward(const Field& u) const
{
    require_same_grid(u.grid, grid_, "KernelTable::forward");
    Spectrum out;
    fft_->forward(u.values, out);
    return out;
}

Field KernelTable::inverse(const Spectrum& spec) const
{
    Field out(grid_);
    fft_->inverse(spec, out.values);
    return out;
}

Field KernelTable::filter(const Field& u, const std::vector<double>& multiplier) const
{
    if (multiplier.size() != symbol_.size())
        throw ParameterError("KernelTable::filter: multiplier size mismatch");
    Spectrum spec = forward(u);
    for (std::size_t i = 0; i < spec.size(); ++i)
        spec[i] *= multiplier[i];
    return inverse(spec);
}

double KernelTable::spectral_sum(const Spectrum& spec, const std::vector<double>& multiplier) const
{
    if (spec.size() != symbol_.size() || multiplier.size() != symbol_.size())
        throw ParameterError("KernelTable::spectral_sum: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i)
        acc += weight_[i] * multiplier[i] * std::norm(spec[i]);
    return acc * grid_.cell_volume() / static_cast<double>(grid_.total_points());
}

KernelTable build_symbol(const Grid& grid, const FracParams& params)
{
    params.validate();
    const double m2 = params.m * params.m;
    const double s = params.s;
    return KernelTable::build(grid, params, [m2, s](double k2) { return std::pow(k2 + m2, s); });
}

KernelTable build_fractional_laplacian(const Grid& grid, double s)
{
    FracParams p{s, 0.0, grid.n_dim()};
    return KernelTable::build(grid, p, [s](double k2) { return k2 == 0.0 ? 0.0 : std::pow(k2, s); });
}

Field apply_operator(const Field& u, const KernelTable& table)
{
    return table.filter(u, table.symbol());
}

Field apply_operator_singular(const Field& u, const FracParams& params, double truncation_radius,
                              SingularDiagnostics* diag)
{
    params.validate();
    if (u.grid.n_dim() != 1 || params.n_dim != 1)
        throw ParameterError("apply_operator_singular: only N = 1 is supported");
    const double h = u.grid.spacing();
    if (!(truncation_radius > h))
        throw ParameterError("apply_operator_singular: truncation radius must exceed the grid spacing");

    const double s = params.s;
    const double m = params.m;
    const double a = 0.5 * (1.0 + 2.0 * s);
    const double c = kernel_constants(params).C_Ns * std::pow(m, a);
    auto kernel = [=](double z) { return c * std::pow(z, -a) * boost::math::cyl_bessel_k(a, m * z); };

    const auto n = static_cast<long>(u.size());
    const long reach = static_cast<long>(std::floor(truncation_radius / h));
    std::vector<double> kj(reach + 1, 0.0);
    for (long j = 1; j <= reach; ++j)
        kj[j] = kernel(static_cast<double>(j) * h);

    // Symmetric trapezoid on [h, reach*h] for each sign of the offset.
    auto weight = [reach](long j) { return (j == 1 || j == reach) ? 0.5 : 1.0; };

    boost::math::quadrature::tanh_sinh<double> ts;
    // z^2 kernel(z) = c z^{2-2a} (z^a K_a(mz)); the bracket tends to Gamma(a) 2^{a-1} m^{-a}.
    const double zk0 = std::tgamma(a) * std::pow(2.0, a - 1.0) * std::pow(m, -a);
    const double ball_moment = 2.0 * ts.integrate(
                                         [&](double z) {
                                             if (!(z > 0.0))
                                                 return 0.0;
                                             const double zk =
                                                 z < 1e-12 / m ? zk0 : std::pow(z, a) * boost::math::cyl_bessel_k(a, m * z);
                                             return c * std::pow(z, 2.0 - 2.0 * a) * zk;
                                         },
                                         0.0, h);
    const double r_end = static_cast<double>(reach) * h;
    boost::math::quadrature::exp_sinh<double> es;
    const double tail_mass = 2.0 * es.integrate([&](double z) { return kernel(z + r_end); });

    auto at = [&](long i) { return (i < 0 || i >= n) ? 0.0 : u[static_cast<std::size_t>(i)]; };

    Field out(u.grid);
    const double m2s = std::pow(m, 2.0 * s);
    double tail_max = 0.0;
    for (long i = 0; i < n; ++i) {
        const double ui = at(i);
        double pv = 0.0;
        for (long j = 1; j <= reach; ++j)
            pv += weight(j) * kj[j] * (2.0 * ui - at(i + j) - at(i - j));
        pv *= h;
        const double u_xx = (at(i + 1) - 2.0 * ui + at(i - 1)) / (h * h);
        pv += -0.5 * u_xx * ball_moment;
        pv += ui * tail_mass;
        tail_max = std::max(tail_max, std::abs(ui) * tail_mass);
        out[static_cast<std::size_t>(i)] = m2s * ui + pv;
    }
    if (diag) {
        diag->tail_estimate = tail_max;
        diag->truncation_radius = r_end;
    }
    return out;
}

Field solve_resolvent(const Field& mu, const KernelTable& table)
{
    std::vector<double> inv(table.symbol().size());
    for (std::size_t i = 0; i < inv.size(); ++i)
        inv[i] = 1.0 / table.symbol()[i];
    return table.filter(mu, inv);
}

double bessel_kernel(const FracParams& params, double r)
{
    params.validate();
    if (!(r > 0.0))
        throw std::domain_error("bessel_kernel: r must be positive");
    const double n = params.n_dim;
    const double s = params.s;
    const double m = params.m;
    const double nu = 0.5 * (n - 2.0 * s);
    const double norm = std::pow(2.0, 0.5 * (n + 2.0 * s - 2.0)) * std::pow(std::numbers::pi, 0.5 * n)
                        * std::tgamma(s);
    return std::pow(m, nu) * boost::math::cyl_bessel_k(nu, m * r) * std::pow(r, -nu) / norm;
}

double quadratic_form(const Field& u, const KernelTable& table)
{
    return table.spectral_sum(table.forward(u), table.symbol());
}

} // namespace frns
