#pragma once

#include <stdexcept>
#include <string>

namespace frns {

class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Order s, mass m and dimension N of (-Delta + m^2)^s.
struct FracParams {
    double s = 0.5;
    double m = 1.0;
    int n_dim = 2;

    // 2N/(N-2s)
    double critical_exponent() const;
    void validate() const;
};

double bessel_k(double nu, double x);

// (2/Gamma(s)) (r/2)^s K_s(r), with the limit value 1 at r = 0.
double theta_profile(double s, double r);
double theta_profile_derivative(double s, double r);

double sigma_s(double s);

struct KappaReport {
    double integral = 0.0;
    double integral_error = 0.0;
    double limit = 0.0;
    double limit_error = 0.0;
};

// Evaluates kappa_s both as the weighted energy of theta and as the
// conormal limit at y = 0. Throws NumericalError if the quadrature does not
// reach its tolerance or the two routes disagree by more than 1e-6.
KappaReport kappa_s_detail(double s);
double kappa_s(double s);

double sobolev_trace_constant(int n_dim, double s);

struct KernelConstants {
    double C_Ns = 0.0;
    double p_Ns = 0.0;
    double c_prime_Ns = 0.0;
};

KernelConstants kernel_constants(const FracParams& params);

} // namespace frns
