#include "frns/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "power.hpp"

namespace frns {

namespace {

double sq_dist(const Point& a, const Point& b, int n_dim)
{
    const double dx = a[0] - b[0];
    const double dy = n_dim == 1 ? 0.0 : a[1] - b[1];
    return dx * dx + dy * dy;
}

[[noreturn]] void fail(const std::string& name, const std::string& detail)
{
    throw ParameterError(name + ": " + detail);
}

} // namespace

bool Region::contains(const Point& x, int n_dim) const
{
    if (kind == Kind::Ball)
        return sq_dist(x, center, n_dim) < radius * radius;
    if (!(x[0] > lo[0] && x[0] < hi[0]))
        return false;
    return n_dim == 1 || (x[1] > lo[1] && x[1] < hi[1]);
}

double Region::distance(const Point& x, int n_dim) const
{
    if (kind == Kind::Ball)
        return std::max(0.0, std::sqrt(sq_dist(x, center, n_dim)) - radius);
    const double dx = std::max({lo[0] - x[0], 0.0, x[0] - hi[0]});
    const double dy = n_dim == 1 ? 0.0 : std::max({lo[1] - x[1], 0.0, x[1] - hi[1]});
    return std::hypot(dx, dy);
}

std::vector<Point> Region::boundary_samples(int n_dim, int count) const
{
    std::vector<Point> out;
    if (n_dim == 1) {
        if (kind == Kind::Ball)
            return {{center[0] - radius, 0.0}, {center[0] + radius, 0.0}};
        return {{lo[0], 0.0}, {hi[0], 0.0}};
    }
    if (kind == Kind::Ball) {
        for (int i = 0; i < count; ++i) {
            const double t = 2.0 * std::numbers::pi * i / count;
            out.push_back({center[0] + radius * std::cos(t), center[1] + radius * std::sin(t)});
        }
        return out;
    }
    for (int i = 0; i <= count; ++i) {
        const double fx = lo[0] + (hi[0] - lo[0]) * i / count;
        const double fy = lo[1] + (hi[1] - lo[1]) * i / count;
        out.push_back({fx, lo[1]});
        out.push_back({fx, hi[1]});
        out.push_back({lo[0], fy});
        out.push_back({hi[0], fy});
    }
    return out;
}

std::vector<Point> Region::interior_samples(int n_dim, int per_axis) const
{
    Point a = lo, b = hi;
    if (kind == Kind::Ball) {
        a = {center[0] - radius, center[1] - radius};
        b = {center[0] + radius, center[1] + radius};
    }
    std::vector<Point> out;
    const int ny = n_dim == 1 ? 1 : per_axis;
    for (int i = 0; i < per_axis; ++i)
        for (int j = 0; j < ny; ++j) {
            Point p{a[0] + (b[0] - a[0]) * (i + 0.5) / per_axis,
                    n_dim == 1 ? 0.0 : a[1] + (b[1] - a[1]) * (j + 0.5) / per_axis};
            if (contains(p, n_dim))
                out.push_back(p);
        }
    return out;
}

double PotentialSpec::operator()(const Point& x, int n_dim) const
{
    if (shape == "constant")
        return -V0;
    const double w2 = width * width;
    double bump = 0.0;
    for (const auto& c : minima)
        bump = std::max(bump, std::exp(-sq_dist(x, c, n_dim) / w2));
    double v = top - (top + V0) * bump;
    if (!decoys.empty()) {
        double d = 0.0;
        for (const auto& c : decoys)
            d = std::max(d, std::exp(-sq_dist(x, c, n_dim) / w2));
        v = std::min(v, top - (top + V1) * d);
    }
    return v;
}

double NonlinearitySpec::f(double t) const
{
    return t > 0.0 ? lambda * detail::power(t, p - 1.0) : 0.0;
}

double NonlinearitySpec::F(double t) const
{
    return t > 0.0 ? lambda * detail::power(t, p) / p : 0.0;
}

double penalization_residual(const ModelConfig& config, double a)
{
    const double crit = config.frac.critical_exponent();
    return config.nonlin.f(a) + std::pow(a, crit - 1.0) - config.potential.V1 / config.pen.kappa * a;
}

double solve_penalization_threshold(const ModelConfig& config)
{
    const double crit = config.frac.critical_exponent();
    const auto& nl = config.nonlin;
    const double slope = config.potential.V1 / config.pen.kappa;
    if (!(slope > 0.0) || !(nl.lambda >= 0.0) || !(nl.p > 2.0) || !(crit > 2.0))
        fail("threshold a", "no positive root of f(a) + a^{2*-1} = (V1/kappa) a for these parameters");

    // After dividing by a the left side is increasing, so the root is unique.
    auto h = [&](double a) { return nl.lambda * std::pow(a, nl.p - 2.0) + std::pow(a, crit - 2.0) - slope; };
    double lo = 0.0, hi = 1.0;
    while (h(hi) < 0.0) {
        hi *= 2.0;
        if (hi > 1e12)
            fail("threshold a", "root bracketing failed");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-17 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) < 0.0 ? lo : hi) = mid;
    }
    double a = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) {
        const double dh = nl.lambda * (nl.p - 2.0) * std::pow(a, nl.p - 3.0) + (crit - 2.0) * std::pow(a, crit - 3.0);
        const double next = a - h(a) / dh;
        if (!(next > lo && next < hi))
            break;
        a = next;
    }
    if (!(std::abs(penalization_residual(config, a)) <= 1e-12))
        fail("threshold a", "root residual above 1e-12");
    return a;
}

double g_branch(const ModelConfig& config, bool inside, double t)
{
    if (t <= 0.0)
        return 0.0;
    const double crit = config.frac.critical_exponent();
    if (inside || t < config.pen.a)
        return config.nonlin.f(t) + detail::power(t, crit - 1.0);
    return config.potential.V1 / config.pen.kappa * t;
}

double G_branch(const ModelConfig& config, bool inside, double t)
{
    if (t <= 0.0)
        return 0.0;
    const double crit = config.frac.critical_exponent();
    if (inside || t < config.pen.a)
        return config.nonlin.F(t) + detail::power(t, crit) / crit;
    const double a = config.pen.a;
    return config.nonlin.F(a) + std::pow(a, crit) / crit + 0.5 * config.potential.V1 / config.pen.kappa * (t * t - a * a);
}

double g_eval(const ModelConfig& config, const Point& x, double t)
{
    return g_branch(config, config.potential.lambda.contains(x, config.frac.n_dim), t);
}

double G_eval(const ModelConfig& config, const Point& x, double t)
{
    return G_branch(config, config.potential.lambda.contains(x, config.frac.n_dim), t);
}

AssumptionReport validate(ModelConfig& config)
{
    AssumptionReport rep;
    try {
        config.frac.validate();
    } catch (const ParameterError& e) {
        fail("(frac)", e.what());
    }
    const int n = config.frac.n_dim;
    if (n > 2)
        fail("(frac)", "only N = 1 and N = 2 are supported");
    const double s = config.frac.s;
    const double m2s = std::pow(config.frac.m, 2.0 * s);
    const double crit = config.frac.critical_exponent();
    rep.verified.push_back("(frac) 0 < s < 1, m > 0, N > 2s");

    if (!(config.eps > 0.0))
        fail("(eps)", "epsilon must be positive");

    auto& pot = config.potential;
    if (pot.shape != "gaussian_wells" && pot.shape != "constant")
        fail("(V1)", "unknown potential shape '" + pot.shape + "'");
    if (!(pot.V1 > 0.0 && pot.V1 < m2s)) {
        std::ostringstream msg;
        msg << "need 0 < V1 < m^{2s} = " << m2s << ", got V1 = " << pot.V1;
        fail("(V1)", msg.str());
    }
    if (!(pot.V0 > 0.0))
        fail("(V2)", "V0 must be positive");
    double inf_v = -pot.V0;
    if (pot.shape == "gaussian_wells") {
        if (!(pot.width > 0.0))
            fail("(V1)", "well width must be positive");
        if (!(pot.top > -pot.V0))
            fail("(V2)", "wells must lie below the background level");
        if (pot.minima.empty())
            fail("(V2)", "at least one designated minimum is required");
        if (!pot.decoys.empty())
            inf_v = std::min(inf_v, -pot.V1);
    }
    if (std::abs(inf_v + pot.V1) > 1e-12 * pot.V1) {
        std::ostringstream msg;
        msg << "global infimum of V is " << inf_v << " but -V1 = " << -pot.V1;
        fail("(V1)", msg.str());
    }
    rep.verified.push_back("(V1) -V1 = inf V with 0 < V1 < m^{2s}");

    const auto& lam = pot.lambda;
    if (lam.kind == Region::Kind::Ball ? !(lam.radius > 0.0)
                                       : !(lam.hi[0] > lam.lo[0] && (n == 1 || lam.hi[1] > lam.lo[1])))
        fail("(V2)", "Lambda must be a nonempty bounded open set");
    for (const auto& mpt : pot.minima) {
        if (!lam.contains(mpt, n))
            fail("(V2)", "designated minimum lies outside Lambda");
        if (std::abs(pot(mpt, n) + pot.V0) > 1e-12)
            fail("(V2)", "V at a designated minimum differs from -V0");
    }
    double inf_inside = std::numeric_limits<double>::infinity();
    for (const auto& x : lam.interior_samples(n, 201))
        inf_inside = std::min(inf_inside, pot(x, n));
    if (inf_inside < -pot.V0 * (1.0 + 1e-12))
        fail("(V2)", "V drops below -V0 inside Lambda");
    double min_boundary = std::numeric_limits<double>::infinity();
    for (const auto& x : lam.boundary_samples(n, 2048))
        min_boundary = std::min(min_boundary, pot(x, n));
    if (!(min_boundary > -pot.V0)) {
        std::ostringstream msg;
        msg << "min of V on the boundary of Lambda (" << min_boundary << ") is not above -V0";
        fail("(V2)", msg.str());
    }
    rep.verified.push_back("(V2) -V0 = inf over Lambda < min over boundary, minima in Lambda");

    const auto& nl = config.nonlin;
    if (!(nl.lambda > 0.0))
        fail("(f2)", "lambda must be positive");
    if (!(nl.p > 2.0 && nl.p < crit)) {
        std::ostringstream msg;
        msg << "need 2 < p < 2*_s = " << crit << ", got p = " << nl.p;
        fail("(f2)", msg.str());
    }
    if (!(nl.q > nl.p && nl.q < crit))
        fail("(f2)", "need p < q < 2*_s so that f(t)/t^{q-1} -> 0");
    rep.verified.push_back("(f1) f(t)/t -> 0 as t -> 0");
    rep.verified.push_back("(f2) f(t) >= lambda t^{p-1} with 2 < p < q < 2*_s");
    if (n > 2.0 * s && n < 4.0 * s && nl.p <= crit - 2.0)
        rep.warnings.push_back("(f2) 2s < N < 4s and p <= 2*_s - 2: lambda must be sufficiently large; "
                               "check the level against the mountain-pass bound");
    if (!(nl.ar_theta > 2.0 && nl.ar_theta < nl.q))
        fail("(f3)", "need 2 < theta < q");
    if (!(nl.ar_theta <= nl.p))
        fail("(f3)", "theta F(t) <= t f(t) requires theta <= p for a pure power");
    rep.verified.push_back("(f3) 0 < theta F(t) <= t f(t)");
    rep.verified.push_back("(f4) f(t)/t increasing");

    const double bound = std::max(pot.V1 / (m2s - pot.V1), nl.ar_theta / (nl.ar_theta - 2.0));
    if (!(config.pen.kappa > bound)) {
        std::ostringstream msg;
        msg << "kappa = " << config.pen.kappa << " must exceed max{V1/(m^{2s}-V1), theta/(theta-2)} = " << bound;
        fail("kappa bound", msg.str());
    }
    rep.verified.push_back("kappa bound kappa > max{V1/(m^{2s}-V1), theta/(theta-2)}");

    if (config.pen.a > 0.0) {
        if (!(std::abs(penalization_residual(config, config.pen.a)) <= 1e-12))
            fail("threshold a", "configured a does not solve f(a) + a^{2*-1} = (V1/kappa) a");
    } else {
        config.pen.a = solve_penalization_threshold(config);
    }
    rep.verified.push_back("threshold a solves f(a) + a^{2*-1} = (V1/kappa) a");
    return rep;
}

double DiscreteProblem::g(std::size_t i, double t) const
{
    if (t <= 0.0)
        return 0.0;
    if (inside[i] || t < a)
        return nonlin.f(t) + detail::power(t, crit - 1.0);
    return V1 / kappa * t;
}

double DiscreteProblem::G(std::size_t i, double t) const
{
    if (t <= 0.0)
        return 0.0;
    if (inside[i] || t < a)
        return nonlin.F(t) + detail::power(t, crit) / crit;
    return nonlin.F(a) + std::pow(a, crit) / crit + 0.5 * V1 / kappa * (t * t - a * a);
}

DiscreteProblem discretize(const ModelConfig& config, const Grid& grid)
{
    if (grid.n_dim() != config.frac.n_dim)
        throw ParameterError("discretize: grid dimension differs from N");
    DiscreteProblem prob{build_symbol(grid, config.frac), {}, {}, config.nonlin,
                         config.frac.critical_exponent(), config.potential.V1, config.pen.kappa, config.pen.a};
    const std::size_t n = grid.total_points();
    prob.potential.resize(n);
    prob.inside.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        Point x = grid.point(i);
        x[0] *= config.eps;
        x[1] *= config.eps;
        prob.potential[i] = config.potential(x, grid.n_dim());
        prob.inside[i] = config.potential.lambda.contains(x, grid.n_dim()) ? 1 : 0;
    }
    return prob;
}

DiscreteProblem discretize_autonomous(const FracParams& frac, const NonlinearitySpec& nonlin, double mu,
                                      const Grid& grid)
{
    DiscreteProblem prob{build_symbol(grid, frac), std::vector<double>(grid.total_points(), mu),
                         std::vector<unsigned char>(grid.total_points(), 1), nonlin, frac.critical_exponent(),
                         0.0, 1.0, 0.0};
    return prob;
}

double penalized_norm_sq(const DiscreteProblem& prob, const Field& u)
{
    const Field au = apply_operator(u, prob.table);
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        acc += u[i] * au[i] + prob.potential[i] * u[i] * u[i];
    return acc * u.grid.cell_volume();
}

double energy(const DiscreteProblem& prob, const Field& u, const Field& au)
{
    double quad = 0.0, nonlinear = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        quad += u[i] * au[i] + prob.potential[i] * u[i] * u[i];
        nonlinear += prob.G(i, u[i]);
    }
    return (0.5 * quad - nonlinear) * u.grid.cell_volume();
}

double energy(const DiscreteProblem& prob, const Field& u)
{
    if (u.grid != prob.grid())
        throw ParameterError("energy: grid mismatch");
    return energy(prob, u, apply_operator(u, prob.table));
}

Field energy_gradient(const DiscreteProblem& prob, const Field& u, const Field& au)
{
    Field out(u.grid);
    for (std::size_t i = 0; i < u.size(); ++i)
        out[i] = au[i] + prob.potential[i] * u[i] - prob.g(i, u[i]);
    return out;
}

Field energy_gradient(const DiscreteProblem& prob, const Field& u)
{
    if (u.grid != prob.grid())
        throw ParameterError("energy_gradient: grid mismatch");
    return energy_gradient(prob, u, apply_operator(u, prob.table));
}

double energy(const ModelConfig& config, const Field& u, const KernelTable& table)
{
    auto prob = discretize(config, u.grid);
    return energy(prob, u, apply_operator(u, table));
}

Field energy_gradient(const ModelConfig& config, const Field& u, const KernelTable& table)
{
    auto prob = discretize(config, u.grid);
    return energy_gradient(prob, u, apply_operator(u, table));
}

} // namespace frns
