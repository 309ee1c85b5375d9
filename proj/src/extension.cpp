#include "frns/extension.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

namespace frns {

namespace {

// Fornberg weights for the first derivative at x0 from the given nodes.
std::vector<double> first_derivative_weights(double x0, const std::vector<double>& x)
{
    const std::size_t n = x.size();
    std::vector<std::array<double, 2>> c(n, {0.0, 0.0});
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t mn = std::min<std::size_t>(i, 1);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (std::size_t k = mn; k >= 1; --k)
                    c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (std::size_t k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = c[i][1];
    return w;
}

void check_stack(const ExtensionStack& stack)
{
    if (stack.y_levels.empty() || stack.y_levels[0] != 0.0)
        throw ParameterError("extension stack must start at y = 0");
    if (stack.slabs.size() != stack.y_levels.size())
        throw ParameterError("extension stack: one slab per level required");
    for (std::size_t j = 1; j < stack.y_levels.size(); ++j)
        if (!(stack.y_levels[j] > stack.y_levels[j - 1]))
            throw ParameterError("extension stack: y levels must be strictly increasing");
    for (const auto& f : stack.slabs)
        if (f.grid != stack.grid)
            throw ParameterError("extension stack: slab grid mismatch");
}

// Solves the small dense system a w = b in place (partial pivoting).
std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b)
{
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col]))
                piv = r;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        if (a[col][col] == 0.0)
            throw NumericalError("singular extrapolation system");
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k)
                a[r][k] -= f * a[col][k];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t k = i + 1; k < n; ++k)
            acc -= a[i][k] * x[k];
        x[i] = acc / a[i][i];
    }
    return x;
}

// Weights w with sum_j w_j Q(y_j) = Q(0) for Q(y) = Q0 + sum_i c_i y^{p_i}.
std::vector<double> extrapolation_weights(const std::vector<double>& y, const std::vector<double>& powers)
{
    const std::size_t n = y.size();
    // Rows: moment conditions sum_j w_j y_j^p = [p == 0].
    std::vector<std::vector<double>> a(n, std::vector<double>(n));
    std::vector<double> b(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        a[0][j] = 1.0;
    b[0] = 1.0;
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a[i][j] = std::pow(y[j] / y[0], powers[i - 1]);
    return solve_dense(std::move(a), std::move(b));
}

} // namespace

std::vector<double> default_y_levels(double m)
{
    if (!(m > 0.0))
        throw ParameterError("default_y_levels: m must be positive");
    constexpr int count = 48;
    const double lo = std::log(1e-4 / m);
    const double hi = std::log(20.0 / m);
    std::vector<double> y{0.0};
    for (int j = 0; j < count; ++j)
        y.push_back(std::exp(lo + (hi - lo) * j / (count - 1)));
    return y;
}

ExtensionStack extend(const Field& u, const FracParams& params, const std::vector<double>& y_levels)
{
    return extend(u, build_symbol(u.grid, params), y_levels);
}

ExtensionStack extend(const Field& u, const KernelTable& table, const std::vector<double>& y_levels)
{
    if (u.grid != table.grid())
        throw ParameterError("extend: grid mismatch");
    ExtensionStack stack;
    stack.grid = u.grid;
    stack.y_levels = y_levels;
    if (y_levels.empty() || y_levels[0] != 0.0)
        throw ParameterError("extend: y_levels must start at 0");

    const double s = table.params().s;
    const double m2 = table.params().m * table.params().m;
    const Spectrum uhat = table.forward(u);
    const auto& k2 = table.k_squared();
    stack.slabs.reserve(y_levels.size());
    stack.slabs.push_back(u);
    for (std::size_t j = 1; j < y_levels.size(); ++j) {
        if (!(y_levels[j] > y_levels[j - 1]))
            throw ParameterError("extend: y_levels must be strictly increasing");
        Spectrum spec(uhat.size());
        for (std::size_t i = 0; i < spec.size(); ++i)
            spec[i] = uhat[i] * theta_profile(s, y_levels[j] * std::sqrt(k2[i] + m2));
        stack.slabs.push_back(table.inverse(spec));
    }
    return stack;
}

Field conormal_derivative(const ExtensionStack& stack, const FracParams& params, ConormalDiagnostics* diag)
{
    check_stack(stack);
    params.validate();
    const std::size_t positive = stack.y_levels.size() - 1;
    if (positive < 4)
        throw ParameterError("conormal_derivative: at least 4 positive y levels required");

    const double s = params.s;
    const std::vector<double> powers{2.0 - 2.0 * s, 2.0, 4.0 - 2.0 * s};
    const std::size_t used = powers.size() + 1;
    std::vector<double> y(stack.y_levels.begin() + 1, stack.y_levels.begin() + 1 + used);

    const auto w_full = extrapolation_weights(y, powers);
    const auto w_low = extrapolation_weights(std::vector<double>(y.begin(), y.end() - 1),
                                             std::vector<double>(powers.begin(), powers.end() - 1));

    const Field& u0 = stack.slabs[0];
    const std::size_t npts = u0.size();
    std::vector<std::vector<double>> q(used, std::vector<double>(npts));
    for (std::size_t j = 0; j < used; ++j) {
        const Field& uj = stack.slabs[j + 1];
        const double scale = 2.0 * s / std::pow(y[j], 2.0 * s);
        for (std::size_t i = 0; i < npts; ++i)
            q[j][i] = scale * (u0[i] - uj[i]);
    }

    Field out(stack.grid);
    double diff2 = 0.0, norm2 = 0.0;
    for (std::size_t i = 0; i < npts; ++i) {
        double hi = 0.0, lo = 0.0;
        for (std::size_t j = 0; j < used; ++j)
            hi += w_full[j] * q[j][i];
        for (std::size_t j = 0; j + 1 < used; ++j)
            lo += w_low[j] * q[j][i];
        out[i] = hi;
        diff2 += (hi - lo) * (hi - lo);
        norm2 += hi * hi;
    }

    if (diag) {
        diag->levels_used = static_cast<int>(used);
        double d1 = 0.0, d2 = 0.0;
        for (std::size_t i = 0; i < npts; ++i) {
            d1 += (q[1][i] - q[0][i]) * (q[1][i] - q[0][i]);
            d2 += (q[2][i] - q[1][i]) * (q[2][i] - q[1][i]);
        }
        diag->estimated_order = (d1 > 0.0 && d2 > 0.0)
                                    ? std::log(std::sqrt(d2 / d1)) / std::log(y[2] / y[1])
                                    : std::numeric_limits<double>::quiet_NaN();
        diag->extrapolation_change = norm2 > 0.0 ? std::sqrt(diff2 / norm2) : 0.0;
        diag->converged = diag->extrapolation_change <= 1e-2;
    }
    return out;
}

double extension_energy(const ExtensionStack& stack, const FracParams& params, EnergyDiagnostics* diag)
{
    return extension_energy(stack, build_symbol(stack.grid, params), diag);
}

double extension_energy(const ExtensionStack& stack, const KernelTable& table, EnergyDiagnostics* diag)
{
    check_stack(stack);
    if (stack.grid != table.grid())
        throw ParameterError("extension_energy: grid mismatch");
    const double s = table.params().s;
    const double m2 = table.params().m * table.params().m;
    const std::size_t levels = stack.y_levels.size() - 1;
    if (levels < 5)
        throw ParameterError("extension_energy: at least 5 positive y levels required");

    std::vector<double> t(levels);
    for (std::size_t j = 0; j < levels; ++j)
        t[j] = std::log(stack.y_levels[j + 1]);

    std::vector<double> mult(table.k_squared().size());
    for (std::size_t i = 0; i < mult.size(); ++i)
        mult[i] = table.k_squared()[i] + m2;

    const double cell = stack.grid.cell_volume();
    const std::size_t npts = stack.grid.total_points();
    std::vector<double> integrand(levels);
    std::vector<double> tangential(levels);
    std::vector<double> normal(levels);
    for (std::size_t j = 0; j < levels; ++j) {
        const double y = stack.y_levels[j + 1];
        tangential[j] = table.spectral_sum(table.forward(stack.slabs[j + 1]), mult);

        // Five-point stencil in t = ln y, one-sided near the ends.
        const std::size_t lo = std::min(j >= 2 ? j - 2 : 0, levels - 5);
        std::vector<double> nodes(t.begin() + lo, t.begin() + lo + 5);
        const auto w = first_derivative_weights(t[j], nodes);
        double acc = 0.0;
        for (std::size_t i = 0; i < npts; ++i) {
            double d = 0.0;
            for (std::size_t k = 0; k < 5; ++k)
                d += w[k] * stack.slabs[lo + k + 1][i];
            d /= y;
            acc += d * d;
        }
        normal[j] = acc * cell;
        integrand[j] = std::pow(y, 1.0 - 2.0 * s) * (tangential[j] + normal[j]);
    }

    double total = 0.0;
    for (std::size_t j = 0; j + 1 < levels; ++j) {
        const double y0 = stack.y_levels[j + 1];
        const double y1 = stack.y_levels[j + 2];
        total += 0.5 * (t[j + 1] - t[j]) * (integrand[j] * y0 + integrand[j + 1] * y1);
    }
    // On [0, y_1]: tangential part ~ const, normal part ~ y^{4s-2}.
    const double y1 = stack.y_levels[1];
    total += tangential[0] * std::pow(y1, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
    total += std::pow(y1, 1.0 - 2.0 * s) * normal[0] * y1 / (2.0 * s);

    if (diag) {
        std::ostringstream msg;
        double kmax2 = 0.0;
        for (double v : table.k_squared())
            kmax2 = std::max(kmax2, v);
        const double m = table.params().m;
        bool warn = false;
        if (levels < 32) {
            warn = true;
            msg << "only " << levels << " positive y levels (>= 32 recommended); ";
        }
        if (y1 * std::sqrt(kmax2 + m2) > 1e-2) {
            warn = true;
            msg << "smallest level does not resolve the highest frequency; ";
        }
        if (stack.y_levels.back() * m < 15.0) {
            warn = true;
            msg << "largest level too small for the tail to vanish; ";
        }
        diag->resolution_warning = warn;
        diag->message = msg.str();
    }
    return total;
}

double poisson_kernel(const FracParams& params, double r, double y)
{
    params.validate();
    if (!(y > 0.0))
        throw ParameterError("poisson_kernel: y must be positive");
    const double a = 0.5 * (params.n_dim + 2.0 * params.s);
    const double rho = std::hypot(r, y);
    const double c = kernel_constants(params).c_prime_Ns;
    return c * std::pow(y, 2.0 * params.s) * std::pow(params.m, a) * std::pow(rho, -a)
           * boost::math::cyl_bessel_k(a, params.m * rho);
}

double poisson_kernel_mass(const FracParams& params, double y, double* error_estimate)
{
    params.validate();
    const int n = params.n_dim;
    const double surface = 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
    auto radial = [&](double r) { return std::pow(r, n - 1) * poisson_kernel(params, r, y); };

    double err_a = 0.0, err_b = 0.0;
    const double inner = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(radial, 0.0, y, 15, 1e-13,
                                                                                         &err_a);
    boost::math::quadrature::exp_sinh<double> es;
    const double outer = es.integrate([&](double r) { return radial(y + r); }, 1e-13, &err_b);
    if (error_estimate)
        *error_estimate = surface * (err_a + err_b);
    return surface * (inner + outer);
}

} // namespace frns
