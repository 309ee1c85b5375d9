#include "frns/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "periodic.hpp"

namespace frns {

namespace {

bool has_positive_inside(const DiscreteProblem& prob, const Field& u)
{
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] > 0.0 && prob.inside[i])
            return true;
    return false;
}

double quadratic_part(const DiscreteProblem& prob, const Field& u, const Field& au)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        acc += u[i] * au[i] + prob.potential[i] * u[i] * u[i];
    return acc * u.grid.cell_volume();
}

std::size_t argmax_lowest(const Field& u)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < u.size(); ++i)
        if (u[i] > u[best])
            best = i;
    return best;
}

void finalize(const DiscreteProblem& prob, SolveResult& r, const Field& au)
{
    const Field& u = r.field;
    const Field grad = energy_gradient(prob, u, au);
    double gmax = 0.0, g2 = 0.0, u2 = 0.0, umax = 0.0, umin = std::numeric_limits<double>::infinity();
    double nehari = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double pg = (u[i] <= 0.0 && grad[i] > 0.0) ? 0.0 : grad[i];
        gmax = std::max(gmax, std::abs(pg));
        g2 += grad[i] * grad[i];
        u2 += u[i] * u[i];
        umax = std::max(umax, std::abs(u[i]));
        umin = std::min(umin, u[i]);
        nehari += grad[i] * u[i];
    }
    r.grad_residual = umax > 0.0 ? gmax / umax : std::numeric_limits<double>::infinity();
    r.el_residual = u2 > 0.0 ? std::sqrt(g2 / u2) : std::numeric_limits<double>::infinity();
    r.nehari_residual = std::abs(nehari * u.grid.cell_volume());
    r.sup_norm = umax;
    r.min_value = umin;
    r.argmax_index = argmax_lowest(u);
    r.argmax_point = u.grid.point(r.argmax_index);
    r.energy = energy(prob, u, au);
}

} // namespace

double nehari_functional(const DiscreteProblem& prob, const Field& u)
{
    const Field au = apply_operator(u, prob.table);
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        acc += u[i] * au[i] + prob.potential[i] * u[i] * u[i] - prob.g(i, u[i]) * u[i];
    return acc * u.grid.cell_volume();
}

double nehari_scale(const DiscreteProblem& prob, const Field& u)
{
    return nehari_scale(prob, u, apply_operator(u, prob.table));
}

double nehari_scale(const DiscreteProblem& prob, const Field& u, const Field& au)
{
    if (!has_positive_inside(prob, u))
        throw NoPositivePartError("nehari_scale: u has no positive part inside Lambda");
    const double q = quadratic_part(prob, u, au);
    if (!(q > 0.0))
        throw NumericalError("nehari_scale: quadratic form is not positive");

    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] > 0.0)
            support.push_back(i);
    const double cell = u.grid.cell_volume();
    // <J'(t u), t u> / t^2, nonincreasing in t.
    auto psi = [&](double t) {
        double acc = 0.0;
        for (std::size_t i : support)
            acc += prob.g(i, t * u[i]) * u[i];
        return q - acc * cell / t;
    };

    double hi = 1.0;
    while (psi(hi) > 0.0) {
        hi *= 2.0;
        if (hi > 1e6)
            throw NoBracketError("nehari_scale: no sign change up to t = 1e6");
    }
    double lo = hi;
    while (psi(lo) <= 0.0) {
        lo *= 0.5;
        if (lo < 1e-300)
            throw NoBracketError("nehari_scale: no sign change towards t = 0");
    }
    if (lo == hi)
        return hi;
    boost::uintmax_t max_iter = 200;
    auto bracket = boost::math::tools::toms748_solve(psi, lo, std::min(hi, 2.0 * lo), boost::math::tools::eps_tolerance<double>(52),
                                                     max_iter);
    return 0.5 * (bracket.first + bracket.second);
}

Field gaussian_bump(const Grid& grid, const Point& center, double width)
{
    return sample(grid, [&](const Point& x) {
        const double d = detail::periodic_distance(grid, x, center);
        return std::exp(-d * d / (width * width));
    });
}

SolveResult ground_state(const DiscreteProblem& prob, const Field& init, const Tolerances& tol,
                         const Observer& observer)
{
    if (init.grid != prob.grid())
        throw ParameterError("ground_state: grid mismatch");
    init.check_finite();

    SolveResult r;
    Field u(init.grid);
    for (std::size_t i = 0; i < u.size(); ++i)
        u[i] = std::max(init[i], 0.0);

    Field au = apply_operator(u, prob.table);
    try {
        const double t = nehari_scale(prob, u, au);
        for (std::size_t i = 0; i < u.size(); ++i) {
            u[i] *= t;
            au[i] *= t;
        }
    } catch (const NumericalError& e) {
        r.field = u;
        r.collapsed = true;
        r.status = std::string("initial Nehari scaling failed: ") + e.what();
        finalize(prob, r, au);
        return r;
    }

    double vmin = *std::min_element(prob.potential.begin(), prob.potential.end());
    std::vector<double> precond(prob.table.symbol().size());
    for (std::size_t i = 0; i < precond.size(); ++i)
        precond[i] = 1.0 / (prob.table.symbol()[i] + vmin);

    const double cell = u.grid.cell_volume();
    double E = energy(prob, u, au);
    r.energy_history.push_back(E);
    double alpha = 1.0;
    int it = 0;
    r.status = "max_iter reached";
    for (; it < tol.max_iter; ++it) {
        const Field grad = energy_gradient(prob, u, au);
        Field pg = grad;
        double gmax = 0.0, umax = 0.0, nehari = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (u[i] <= 0.0 && grad[i] > 0.0)
                pg[i] = 0.0;
            gmax = std::max(gmax, std::abs(pg[i]));
            umax = std::max(umax, std::abs(u[i]));
            nehari += grad[i] * u[i];
        }
        const double gres = gmax / umax;
        const double nres = std::abs(nehari * cell);
        if (observer)
            observer({it, E, gres, alpha});
        if (gres <= tol.grad && nres <= tol.nehari) {
            r.converged = true;
            r.status = "converged";
            break;
        }

        Field d = prob.table.filter(pg, precond);
        double slope = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            d[i] = -d[i];
            if (u[i] <= 0.0 && d[i] < 0.0)
                d[i] = 0.0;
            slope += grad[i] * d[i];
        }
        slope *= cell;
        if (!(slope < 0.0)) {
            // The projection can undo the preconditioned step; use the projected gradient itself.
            slope = 0.0;
            for (std::size_t i = 0; i < d.size(); ++i) {
                d[i] = -pg[i];
                slope += grad[i] * d[i];
            }
            slope *= cell;
        }
        if (!(slope < 0.0)) {
            r.status = "stagnated: no descent direction";
            break;
        }

        bool accepted = false;
        Field w(u.grid);
        while (alpha >= 1e-14) {
            for (std::size_t i = 0; i < u.size(); ++i)
                w[i] = std::max(u[i] + alpha * d[i], 0.0);
            Field aw = apply_operator(w, prob.table);
            double t = 0.0;
            try {
                t = nehari_scale(prob, w, aw);
            } catch (const NumericalError&) {
                alpha *= 0.5;
                continue;
            }
            for (std::size_t i = 0; i < w.size(); ++i) {
                w[i] *= t;
                aw[i] *= t;
            }
            const double Ew = energy(prob, w, aw);
            if (Ew <= E + 1e-4 * alpha * slope) {
                u = std::move(w);
                au = std::move(aw);
                E = Ew;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            r.status = "stagnated: line search failed";
            break;
        }
        r.energy_history.push_back(E);
        alpha = std::min(2.0 * alpha, 4.0);
    }

    r.iterations = it;
    r.field = std::move(u);
    finalize(prob, r, au);
    if (r.sup_norm < 1e-12) {
        r.collapsed = true;
        r.converged = false;
        r.status = "collapsed to the zero field";
    }
    if (!r.converged)
        r.converged = r.grad_residual <= tol.grad && r.nehari_residual <= tol.nehari;
    return r;
}

SolveResult solve_model(const ModelConfig& config, const Grid& grid, const Tolerances& tol, std::uint64_t seed,
                        int restarts, std::vector<double>* all_energies)
{
    const DiscreteProblem prob = discretize(config, grid);
    const auto& minima = config.potential.minima;
    auto to_grid = [&](const Point& m) { return Point{m[0] / config.eps, m[1] / config.eps}; };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> offset(-1.0, 1.0);
    std::uniform_real_distribution<double> width(0.5, 2.0);

    SolveResult best;
    bool have = false;
    auto better = [](const SolveResult& a, const SolveResult& b) {
        if (a.converged != b.converged)
            return a.converged;
        return a.energy < b.energy;
    };
    for (int run = 0; run <= restarts; ++run) {
        Field init;
        if (run == 0) {
            init = gaussian_bump(grid, minima.empty() ? Point{0.0, 0.0} : to_grid(minima.front()), 1.0);
        } else {
            const Point c0 = minima.empty() ? Point{0.0, 0.0}
                                            : to_grid(minima[static_cast<std::size_t>(rng() % minima.size())]);
            const Point c{c0[0] + offset(rng), grid.n_dim() == 1 ? 0.0 : c0[1] + offset(rng)};
            init = gaussian_bump(grid, c, width(rng));
        }
        SolveResult res = ground_state(prob, init, tol);
        if (all_energies)
            all_energies->push_back(res.collapsed ? std::numeric_limits<double>::quiet_NaN() : res.energy);
        if (!have || better(res, best)) {
            best = std::move(res);
            have = true;
        }
    }
    return best;
}

SolveResult autonomous_ground_state(const AutonomousConfig& config, const Grid& grid, const Field& init,
                                    const Tolerances& tol)
{
    config.frac.validate();
    const double m2s = std::pow(config.frac.m, 2.0 * config.frac.s);
    if (!(config.mu > -m2s))
        throw ParameterError("autonomous problem requires mu > -m^{2s}");
    const DiscreteProblem prob = discretize_autonomous(config.frac, config.nonlin, config.mu, grid);
    return ground_state(prob, init, tol);
}

SolveResult autonomous_ground_state(const AutonomousConfig& config, const Grid& grid, const Tolerances& tol)
{
    return autonomous_ground_state(config, grid, gaussian_bump(grid, {0.0, 0.0}, 1.0), tol);
}

double zeta(const ModelConfig& config)
{
    const double m2s = std::pow(config.frac.m, 2.0 * config.frac.s);
    return 1.0 - config.potential.V1 / m2s * (1.0 + 1.0 / config.pen.kappa);
}

double mp_threshold(const ModelConfig& config)
{
    const double s = config.frac.s;
    const double n = config.frac.n_dim;
    const double z = zeta(config);
    if (!(z > 0.0))
        throw ParameterError("zeta must be positive");
    return s / n * std::pow(z * sobolev_trace_constant(config.frac.n_dim, s), n / (2.0 * s));
}

} // namespace frns
