#include "frns/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace frns {

namespace {

constexpr double pi = std::numbers::pi;

void check_order(double s)
{
    if (!(s > 0.0 && s < 1.0)) {
        std::ostringstream msg;
        msg << "fractional order s must lie in (0,1), got " << s;
        throw ParameterError(msg.str());
    }
}

// Beyond this argument K_s underflows and theta is zero to double precision.
constexpr double theta_cutoff = 700.0;

} // namespace

double FracParams::critical_exponent() const
{
    return 2.0 * n_dim / (n_dim - 2.0 * s);
}

void FracParams::validate() const
{
    check_order(s);
    if (!(m > 0.0) || !std::isfinite(m))
        throw ParameterError("mass m must be positive and finite");
    if (n_dim < 1)
        throw ParameterError("dimension N must be at least 1");
    if (!(n_dim > 2.0 * s))
        throw ParameterError("dimension must satisfy N > 2s");
}

double bessel_k(double nu, double x)
{
    if (!(x > 0.0))
        throw std::domain_error("bessel_k: argument must be positive");
    if (!(nu >= 0.0))
        throw std::domain_error("bessel_k: order must be nonnegative");
    return boost::math::cyl_bessel_k(nu, x);
}

double theta_profile(double s, double r)
{
    check_order(s);
    if (r < 0.0)
        throw ParameterError("theta_profile: r must be nonnegative");
    if (r == 0.0)
        return 1.0;
    if (r > theta_cutoff)
        return 0.0;
    return 2.0 / std::tgamma(s) * std::pow(0.5 * r, s) * boost::math::cyl_bessel_k(s, r);
}

double theta_profile_derivative(double s, double r)
{
    check_order(s);
    if (r < 0.0)
        throw ParameterError("theta_profile_derivative: r must be nonnegative");
    if (r == 0.0) {
        if (s < 0.5)
            return -std::numeric_limits<double>::infinity();
        return s == 0.5 ? -1.0 : 0.0;
    }
    if (r > theta_cutoff)
        return 0.0;
    return -2.0 / std::tgamma(s) * std::pow(0.5 * r, s) * boost::math::cyl_bessel_k(1.0 - s, r);
}

double sigma_s(double s)
{
    check_order(s);
    return std::pow(2.0, 1.0 - 2.0 * s) * std::tgamma(1.0 - s) / std::tgamma(s);
}

KappaReport kappa_s_detail(double s)
{
    check_order(s);
    KappaReport rep;

    auto integrand = [s](double y) {
        if (y <= 0.0)
            return 0.0;
        const double t = theta_profile(s, y);
        // Squared after scaling; theta'^2 alone overflows near 0 for small s.
        const double dt = std::pow(y, 0.5 - s) * theta_profile_derivative(s, y);
        return dt * dt + std::pow(y, 1.0 - 2.0 * s) * t * t;
    };

    constexpr double tol = 1e-12;
    boost::math::quadrature::tanh_sinh<double> inner;
    boost::math::quadrature::exp_sinh<double> outer;
    double err_a = 0.0, err_b = 0.0, l1_a = 0.0, l1_b = 0.0;
    const double part_a = inner.integrate(integrand, 0.0, 1.0, tol, &err_a, &l1_a);
    const double part_b = outer.integrate(
        [&](double y) { return integrand(y + 1.0); }, tol, &err_b, &l1_b);
    rep.integral = part_a + part_b;
    rep.integral_error = err_a + err_b;
    if (!(rep.integral_error <= 1e-9 * std::abs(rep.integral))) {
        std::ostringstream msg;
        msg << "kappa_s quadrature did not converge for s=" << s
            << ": estimated error " << rep.integral_error;
        throw NumericalError(msg.str());
    }

    // -y^{1-2s} theta'(y) = sigma_s + a1 y^{2-2s} + a2 y^2 + a3 y^{4-2s} + ...
    constexpr int levels = 6;
    constexpr double y0 = 2e-2;
    constexpr double q = 0.5;
    std::array<double, levels> row{};
    for (int j = 0; j < levels; ++j) {
        const double y = y0 * std::pow(q, j);
        row[j] = -std::pow(y, 1.0 - 2.0 * s) * theta_profile_derivative(s, y);
    }
    const std::array<double, 4> exponents{2.0 - 2.0 * s, 2.0, 4.0 - 2.0 * s, 4.0};
    int len = levels;
    double prev_best = row[levels - 1];
    for (double p : exponents) {
        const double qp = std::pow(q, p);
        prev_best = row[len - 1];
        for (int i = 0; i + 1 < len; ++i)
            row[i] = (row[i + 1] - qp * row[i]) / (1.0 - qp);
        --len;
    }
    rep.limit = row[len - 1];
    rep.limit_error = std::abs(rep.limit - prev_best);

    const double rel = std::abs(rep.integral - rep.limit) / std::abs(rep.integral);
    if (!(rel <= 1e-6)) {
        std::ostringstream msg;
        msg << "kappa_s routes disagree for s=" << s << ": integral " << rep.integral
            << " vs limit " << rep.limit;
        throw NumericalError(msg.str());
    }
    return rep;
}

double kappa_s(double s)
{
    return kappa_s_detail(s).integral;
}

double sobolev_trace_constant(int n_dim, double s)
{
    check_order(s);
    const double n = n_dim;
    if (!(n > 2.0 * s))
        throw ParameterError("sobolev_trace_constant: requires N > 2s");
    const double e = 2.0 * s / n;
    const double num = 2.0 * std::pow(pi, s) * std::tgamma(1.0 - s) * std::tgamma(0.5 * n + s)
                       * std::pow(std::tgamma(0.5 * n), e);
    const double den = std::tgamma(s) * std::tgamma(0.5 * n - s) * std::pow(std::tgamma(n), e);
    return num / den;
}

KernelConstants kernel_constants(const FracParams& params)
{
    params.validate();
    const double n = params.n_dim;
    const double s = params.s;
    const double a = 0.5 * (n + 2.0 * s);
    KernelConstants k;
    k.C_Ns = std::pow(2.0, 1.0 - a) * std::pow(pi, -0.5 * n) * std::pow(2.0, 2.0 * s) * s * (1.0 - s)
             / std::tgamma(2.0 - s);
    k.p_Ns = std::pow(pi, -0.5 * n) * std::tgamma(a) / std::tgamma(s);
    // Chosen so that P_{s,m} tends to the massless Poisson kernel as m -> 0,
    // using K_a(z) ~ Gamma(a) 2^{a-1} z^{-a}.
    k.c_prime_Ns = k.p_Ns * std::pow(2.0, 1.0 - a) / std::tgamma(a);
    return k;
}

} // namespace frns
