#include <gtest/gtest.h>

#include <cmath>

#include "frns/kernel_suite.hpp"
#include "frns/specfun.hpp"
#include "oracles.hpp"

using namespace frns;

TEST(BesselK, MatchesIntegralRepresentation)
{
    for (double nu : {0.0, 0.25, 0.5, 0.75, 1.25, 1.5})
        for (double x : {1e-3, 0.1, 1.0, 5.0, 30.0}) {
            const double ref = oracle::bessel_k(nu, x);
            EXPECT_NEAR(bessel_k(nu, x) / ref, 1.0, 1e-12) << "nu=" << nu << " x=" << x;
        }
}

TEST(BesselK, HalfOrderClosedForm)
{
    for (double x : {0.01, 0.3, 2.0, 20.0})
        EXPECT_NEAR(bessel_k(0.5, x), std::sqrt(M_PI / (2.0 * x)) * std::exp(-x), 1e-14 * bessel_k(0.5, x));
}

TEST(BesselK, RejectsNonPositiveArgument)
{
    EXPECT_THROW(bessel_k(0.5, 0.0), std::domain_error);
    EXPECT_THROW(bessel_k(0.5, -1.0), std::domain_error);
    EXPECT_THROW(bessel_k(-0.5, 1.0), std::domain_error);
}

TEST(Theta, ValueAtZeroIsExactlyOne)
{
    for (double s : {0.1, 0.25, 0.5, 0.75, 0.9})
        EXPECT_EQ(theta_profile(s, 0.0), 1.0);
}

TEST(Theta, MatchesOracle)
{
    for (double s : {0.1, 0.25, 0.5, 0.75, 0.9})
        for (double r : {1e-4, 0.05, 0.5, 1.0, 3.0, 10.0})
            EXPECT_NEAR(theta_profile(s, r) / oracle::theta(s, r), 1.0, 1e-11) << "s=" << s << " r=" << r;
}

TEST(Theta, HalfIsExponential)
{
    for (double r : {0.0, 0.1, 1.0, 2.0, 5.0, 30.0})
        EXPECT_NEAR(theta_profile(0.5, r), std::exp(-r), 1e-10 * std::exp(-r));
}

TEST(Theta, DerivativeMatchesCentralDifference)
{
    for (double s : {0.25, 0.5, 0.75})
        for (double r : {0.1, 1.0, 4.0}) {
            const double d = 1e-5 * r;
            const double fd = (theta_profile(s, r + d) - theta_profile(s, r - d)) / (2.0 * d);
            EXPECT_NEAR(theta_profile_derivative(s, r), fd, 1e-7 * std::abs(fd));
        }
}

TEST(Theta, OdeResidualIsSmall)
{
    for (double s : {0.25, 0.5, 0.75})
        EXPECT_LE(theta_ode_residual(s), 1e-4);
}

TEST(Theta, MonotoneDecreasingAndPositive)
{
    for (double s : {0.25, 0.75}) {
        double prev = 1.0;
        for (double r = 0.01; r < 30.0; r *= 1.3) {
            const double v = theta_profile(s, r);
            EXPECT_GT(v, 0.0);
            EXPECT_LT(v, prev);
            prev = v;
        }
    }
}

TEST(Sigma, MatchesHighPrecisionGamma)
{
    for (double s : {0.1, 0.25, 0.5, 0.75, 0.9})
        EXPECT_NEAR(sigma_s(s), oracle::sigma_s(s), 1e-14 * oracle::sigma_s(s));
    EXPECT_DOUBLE_EQ(sigma_s(0.5), 1.0);
}

TEST(Kappa, EqualsSigmaByBothRoutes)
{
    for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const KappaReport r = kappa_s_detail(s);
        const double ref = oracle::sigma_s(s);
        EXPECT_NEAR(r.integral / ref, 1.0, 1e-6) << "s=" << s;
        EXPECT_NEAR(r.limit / ref, 1.0, 1e-6) << "s=" << s;
    }
}

TEST(SobolevTrace, MatchesHighPrecisionFormula)
{
    EXPECT_NEAR(sobolev_trace_constant(2, 0.5), std::sqrt(M_PI), 1e-14);
    for (auto [n, s] : {std::pair{1, 0.25}, {1, 0.4}, {2, 0.25}, {2, 0.75}})
        EXPECT_NEAR(sobolev_trace_constant(n, s) / oracle::s_star(n, s), 1.0, 1e-13);
    EXPECT_THROW(sobolev_trace_constant(1, 0.6), ParameterError);
}

TEST(FracParams, Validation)
{
    EXPECT_NO_THROW((FracParams{0.5, 1.0, 2}.validate()));
    EXPECT_THROW((FracParams{0.0, 1.0, 2}.validate()), ParameterError);
    EXPECT_THROW((FracParams{1.0, 1.0, 2}.validate()), ParameterError);
    EXPECT_THROW((FracParams{0.5, 0.0, 2}.validate()), ParameterError);
    EXPECT_THROW((FracParams{0.6, 1.0, 1}.validate()), ParameterError);
    EXPECT_DOUBLE_EQ((FracParams{0.5, 1.0, 2}.critical_exponent()), 4.0);
    EXPECT_DOUBLE_EQ((FracParams{0.25, 1.0, 1}.critical_exponent()), 4.0);
}

TEST(KernelConstants, MasslessLimitOfPoissonConstant)
{
    // c' m^a K_a(m rho) rho^{-a} must tend to p rho^{-2a} as m -> 0.
    for (auto [n, s] : {std::pair{1, 0.25}, {2, 0.5}, {2, 0.75}}) {
        const FracParams fp{s, 1.0, n};
        const auto k = kernel_constants(fp);
        const double a = 0.5 * (n + 2.0 * s);
        const double rho = 1.0, m = 1e-6;
        const double lhs = k.c_prime_Ns * std::pow(m, a) * oracle::bessel_k(a, m * rho) * std::pow(rho, -a);
        EXPECT_NEAR(lhs / (k.p_Ns * std::pow(rho, -2.0 * a)), 1.0, 1e-6);
    }
}

TEST(KernelSuite, AllChecksPass)
{
    for (double s : {0.25, 0.5, 0.75}) {
        for (const auto& c : run_kernel_suite(FracParams{s, 1.0, 2}))
            EXPECT_TRUE(c.passed) << c.name << " s=" << s << " error=" << c.error;
    }
    for (const auto& c : run_kernel_suite(FracParams{0.25, 0.7, 1}))
        EXPECT_TRUE(c.passed) << c.name << " error=" << c.error;
}

TEST(KernelSuite, CorruptedSigmaFails)
{
    bool any_failed = false;
    for (const auto& c : run_kernel_suite(FracParams{0.5, 1.0, 2}, 1.01))
        any_failed = any_failed || !c.passed;
    EXPECT_TRUE(any_failed);
}
