#pragma once

// Reference values computed independently of the library: Bessel functions
// from their integral representations, Gamma in 50-digit arithmetic, and
// operators applied to Gaussians through Fourier integrals.

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using hp = boost::multiprecision::cpp_bin_float_50;

inline hp gamma(hp x)
{
    return boost::multiprecision::tgamma(x);
}

// K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt
inline double bessel_k(double nu, double x)
{
    const double t_max = std::acosh(std::max(1.0, 800.0 / x)) + 1.0;
    auto f = [&](double t) { return std::exp(-x * std::cosh(t)) * std::cosh(nu * t); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, t_max, 20, 1e-15);
}

inline double theta(double s, double r)
{
    if (r == 0.0)
        return 1.0;
    return static_cast<double>(2.0 / gamma(hp(s))) * std::pow(0.5 * r, s) * bessel_k(s, r);
}

inline double sigma_s(double s)
{
    const hp hs(s);
    return static_cast<double>(boost::multiprecision::pow(hp(2), 1 - 2 * hs) * gamma(1 - hs) / gamma(hs));
}

inline double s_star(int n, double s)
{
    const hp hs(s), hn(n);
    const hp e = 2 * hs / hn;
    const hp num = 2 * boost::multiprecision::pow(boost::math::constants::pi<hp>(), hs) * gamma(1 - hs)
                   * gamma((hn + 2 * hs) / 2) * boost::multiprecision::pow(gamma(hn / 2), e);
    const hp den = gamma(hs) * gamma((hn - 2 * hs) / 2) * boost::multiprecision::pow(gamma(hn), e);
    return static_cast<double>(num / den);
}

// ((-d^2 + m^2)^s u)(x) for u = exp(-x^2 / (2 w^2)) in 1D, from
// (1/pi) int_0^inf (k^2+m^2)^s u_hat(k) cos(k x) dk.
inline double operator_on_gaussian_1d(double s, double m, double w, double x)
{
    const double norm = w * std::sqrt(2.0 * std::numbers::pi);
    auto f = [&](double k) {
        return std::pow(k * k + m * m, s) * norm * std::exp(-0.5 * w * w * k * k) * std::cos(k * x);
    };
    const double k_max = 40.0 / w;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, k_max, 25, 1e-14)
           / std::numbers::pi;
}

// The same in 2D at |x| = r, by the Hankel transform with J_0.
inline double operator_on_gaussian_2d(double s, double m, double w, double r)
{
    const double norm = 2.0 * std::numbers::pi * w * w;
    auto f = [&](double k) {
        return std::pow(k * k + m * m, s) * norm * std::exp(-0.5 * w * w * k * k)
               * boost::math::cyl_bessel_j(0, k * r) * k;
    };
    const double k_max = 40.0 / w;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, k_max, 25, 1e-14)
           / (2.0 * std::numbers::pi);
}

// Positive root of lambda a^{p-2} + a^{crit-2} = slope by plain bisection.
inline double penalization_threshold(double lambda, double p, double crit, double slope)
{
    double lo = 0.0, hi = 1.0;
    auto h = [&](double a) { return lambda * std::pow(a, p - 2.0) + std::pow(a, crit - 2.0) - slope; };
    while (h(hi) < 0.0)
        hi *= 2.0;
    for (int i = 0; i < 300; ++i) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace oracle
