#include "frns/kernel_suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "frns/extension.hpp"
#include "frns/solver.hpp"
#include "frns/spectral_operator.hpp"

namespace frns {

namespace {

KernelCheck make_check(std::string name, double computed, double expected, double tolerance)
{
    KernelCheck c{std::move(name), computed, expected, tolerance};
    c.error = expected != 0.0 ? std::abs(computed - expected) / std::abs(expected) : std::abs(computed);
    c.passed = std::isfinite(c.error) && c.error <= tolerance;
    return c;
}

std::string label(const std::string& base, double v)
{
    std::ostringstream o;
    o << base << v;
    return o.str();
}

// (G * phi)(r) for phi(x) = (pi w^2)^{-N/2} exp(-|x|^2 / w^2), at |x| = r.
// Below delta the kernel is replaced by its leading term A rho^{-2 nu}; the
// next term is smaller by a factor delta^{2 nu}.
double reference_kernel_convolution(const FracParams& params, double w, double r)
{
    using boost::math::quadrature::tanh_sinh;
    const double n = params.n_dim;
    const double s = params.s;
    const double nu = 0.5 * (n - 2.0 * s);
    const double w2 = w * w;
    const double reach = r + 12.0 * w;
    const double delta = 1e-8 / params.m;
    const double lead = std::tgamma(nu) * std::pow(2.0, nu - 1.0)
                        / (std::pow(2.0, 0.5 * (n + 2.0 * s - 2.0)) * std::pow(std::numbers::pi, 0.5 * n) * std::tgamma(s));
    std::function<double(double)> f;
    double h0 = 0.0;
    if (params.n_dim == 1) {
        const double norm = 1.0 / std::sqrt(std::numbers::pi * w2);
        f = [=, &params](double rho) {
            return bessel_kernel(params, rho) * norm
                   * (std::exp(-(r - rho) * (r - rho) / w2) + std::exp(-(r + rho) * (r + rho) / w2));
        };
        h0 = 2.0 * norm * std::exp(-r * r / w2);
    } else {
        // Angular integral of the shifted Gaussian: 2 pi e^{-(r^2+rho^2)/w^2} I_0(2 r rho / w^2).
        f = [=, &params](double rho) {
            const double z = 2.0 * r * rho / w2;
            const double i0 = z < 600.0 ? boost::math::cyl_bessel_i(0, z) * std::exp(-z)
                                         : 1.0 / std::sqrt(2.0 * std::numbers::pi * z);
            return rho * bessel_kernel(params, rho) * 2.0 * std::exp(-(r - rho) * (r - rho) / w2) * i0 / w2;
        };
        h0 = 2.0 * std::exp(-r * r / w2) / w2;
    }
    const double near = lead * h0 * std::pow(delta, 2.0 * s) / (2.0 * s);
    tanh_sinh<double> ts;
    if (r > delta)
        return near + ts.integrate(f, delta, r, 1e-12) + ts.integrate(f, r, reach, 1e-12);
    return near + ts.integrate(f, delta, reach, 1e-12);
}

} // namespace

double theta_ode_residual(double s, double y_lo, double y_hi, int points)
{
    auto derivs = [s](double t, double d, double& dt, double& dtt) {
        const double fp = theta_profile(s, std::exp(t + d));
        const double f0 = theta_profile(s, std::exp(t));
        const double fm = theta_profile(s, std::exp(t - d));
        dt = (fp - fm) / (2.0 * d);
        dtt = (fp - 2.0 * f0 + fm) / (d * d);
    };
    double worst = 0.0;
    for (int j = 0; j < points; ++j) {
        const double t = std::log(y_lo) + (std::log(y_hi) - std::log(y_lo)) * j / (points - 1);
        constexpr double d = 0.04;
        double a1, a2, b1, b2, c1, c2;
        derivs(t, d, a1, a2);
        derivs(t, d / 2, b1, b2);
        derivs(t, d / 4, c1, c2);
        const double r1 = (4.0 * b1 - a1) / 3.0, r1b = (4.0 * c1 - b1) / 3.0;
        const double r2 = (4.0 * b2 - a2) / 3.0, r2b = (4.0 * c2 - b2) / 3.0;
        const double th_t = (16.0 * r1b - r1) / 15.0;
        const double th_tt = (16.0 * r2b - r2) / 15.0;
        // In t = ln y the equation reads theta_tt - 2s theta_t = y^2 theta.
        const double y = std::exp(t);
        const double th = theta_profile(s, y);
        worst = std::max(worst, std::abs(th_tt - 2.0 * s * th_t - y * y * th) / (y * y * th));
    }
    return worst;
}

std::vector<KernelCheck> run_kernel_suite(const FracParams& params, double sigma_scale)
{
    params.validate();
    const double s = params.s;
    const double m = params.m;
    const int n_dim = params.n_dim;
    const double sigma = sigma_s(s) * sigma_scale;
    std::vector<KernelCheck> out;

    for (double y : {0.1, 1.0, 5.0}) {
        const double mass = poisson_kernel_mass(params, y / m);
        out.push_back(make_check(label("poisson_mass_y=", y / m), mass, theta_profile(s, y), 1e-6));
    }
    out.push_back(make_check("theta_at_zero", theta_profile(s, 0.0), 1.0, 0.0));
    out.push_back(make_check("theta_ode_residual", theta_ode_residual(s), 0.0, 1e-4));
    if (s == 0.5)
        for (double r : {0.1, 1.0, 2.0, 5.0})
            out.push_back(make_check(label("theta_half_closed_form_r=", r), theta_profile(s, r), std::exp(-r), 1e-10));

    const KappaReport kr = kappa_s_detail(s);
    out.push_back(make_check("kappa_integral_vs_limit", kr.integral, kr.limit, 1e-6));
    out.push_back(make_check("kappa_vs_sigma", kr.integral, sigma, 1e-6));

    {
        // cos(x) is a lattice mode on [-2 pi, 2 pi).
        const Grid g(n_dim, 64, 2.0 * std::numbers::pi);
        const Field u = sample(g, [](const Point& x) { return std::cos(x[0]); });
        const auto stack = extend(u, params, default_y_levels(m));
        const Field dn = conormal_derivative(stack, params);
        Field expected(g);
        const double lam = sigma * std::pow(1.0 + m * m, s);
        for (std::size_t i = 0; i < u.size(); ++i)
            expected[i] = lam * u[i];
        out.push_back(make_check("conormal_cos_mode", relative_l2_error(dn, expected), 0.0, 1e-2));
    }

    const Grid g(n_dim, n_dim == 1 ? 1024 : 256, 16.0 / m);
    const KernelTable table = build_symbol(g, params);
    {
        std::mt19937_64 rng(7);
        std::normal_distribution<double> nd;
        Field noise(g);
        for (auto& v : noise.values)
            v = nd(rng);
        // Smooth it so the round trip is not dominated by the top modes.
        std::vector<double> smooth(table.symbol().size());
        for (std::size_t i = 0; i < smooth.size(); ++i)
            smooth[i] = std::exp(-table.k_squared()[i]);
        const Field mu = table.filter(noise, smooth);
        const Field back = apply_operator(solve_resolvent(mu, table), table);
        double worst = 0.0;
        const double scale = max_abs(mu);
        for (std::size_t i = 0; i < mu.size(); ++i)
            worst = std::max(worst, std::abs(back[i] - mu[i]) / scale);
        out.push_back(make_check("resolvent_round_trip", worst, 0.0, 1e-10));
    }
    {
        // A Gaussian source is resolved by the grid, unlike a point mass whose
        // truncated spectrum rings. The reference is the convolution of the
        // closed-form kernel with the same Gaussian, by radial quadrature.
        const double w = 0.5 / m;
        const double norm = std::pow(std::numbers::pi * w * w, -0.5 * n_dim);
        const std::size_t c = g.points_per_dim() / 2;
        const std::size_t origin = g.flat_index(c, n_dim == 1 ? 0 : c);
        const Field src = sample(g, [&](const Point& x) { return norm * std::exp(-(x[0] * x[0] + x[1] * x[1]) / (w * w)); });
        const Field z = solve_resolvent(src, table);
        double worst = 0.0;
        for (std::size_t i = c; i < g.points_per_dim(); ++i) {
            const std::size_t idx = g.flat_index(i, n_dim == 1 ? 0 : c);
            const double r = g.point(idx)[0];
            if (r < 1.0 / m || r > 4.0 / m)
                continue;
            const double ref = reference_kernel_convolution(params, w, r);
            worst = std::max(worst, std::abs(z[idx] - ref) / ref);
        }
        bool positive = true;
        Field closed(g);
        for (std::size_t i = 0; i < g.total_points(); ++i) {
            const Point x = g.point(i);
            const double r = std::hypot(x[0], x[1]);
            closed[i] = r > 0.0 ? bessel_kernel(params, r) : bessel_kernel(params, 0.5 * g.spacing());
            positive = positive && closed[i] > 0.0;
        }
        out.push_back(make_check("bessel_kernel_positive", positive ? 1.0 : 0.0, 1.0, 0.0));
        out.push_back(make_check("resolvent_vs_bessel_kernel", worst, 0.0, 1e-8));
        const DecayFit fz = decay_fit(z, origin);
        const DecayFit fg = decay_fit(closed, origin);
        out.push_back(make_check("resolvent_decay_rate", fz.C2, fg.C2, 0.15));
    }
    return out;
}

} // namespace frns
