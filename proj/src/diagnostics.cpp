#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "frns/solver.hpp"
#include "periodic.hpp"

namespace frns {

RegionReport verify_solution_region(const SolveResult& result, const DiscreteProblem& prob)
{
    const Field& u = result.field;
    if (u.grid != prob.grid())
        throw ParameterError("verify_solution_region: grid mismatch");
    RegionReport rep;
    rep.a = prob.a;
    rep.min_value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!prob.inside[i])
            rep.max_outside = std::max(rep.max_outside, u[i]);
        rep.sup_norm = std::max(rep.sup_norm, std::abs(u[i]));
        rep.min_value = std::min(rep.min_value, u[i]);
    }
    rep.below_threshold = rep.max_outside < rep.a;
    rep.nonnegative = rep.min_value >= -1e-12;
    return rep;
}

DecayFit decay_fit(const Field& u, std::size_t argmax_index)
{
    const Point centre = u.grid.point(argmax_index);
    const double sup = u[argmax_index];
    if (!(sup > 0.0))
        throw NumericalError("decay_fit: field maximum is not positive");
    std::vector<double> r, y;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] >= 1e-8 * sup && u[i] <= 1e-2 * sup) {
            r.push_back(detail::periodic_distance(u.grid, u.grid.point(i), centre));
            y.push_back(std::log(u[i]));
        }
    }
    if (r.size() < 3)
        throw NumericalError("decay_fit: annulus is empty; the field does not decay below 1e-2 sup in the box");

    const double n = static_cast<double>(r.size());
    double mr = 0.0, my = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        mr += r[i];
        my += y[i];
    }
    mr /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        sxx += (r[i] - mr) * (r[i] - mr);
        sxy += (r[i] - mr) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0))
        throw NumericalError("decay_fit: degenerate annulus");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mr;

    DecayFit fit;
    fit.samples = r.size();
    fit.C2 = -slope;
    fit.C1 = std::exp(intercept);
    double ss_res = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double e = y[i] - (intercept + slope * r[i]);
        ss_res += e * e;
        fit.envelope_C1 = std::max(fit.envelope_C1, std::exp(y[i] + fit.C2 * r[i]));
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    fit.bound_holds = fit.envelope_C1 <= 1.1 * fit.C1;
    return fit;
}

DecayFit decay_fit(const SolveResult& result)
{
    return decay_fit(result.field, result.argmax_index);
}

SweepReport concentration_sweep(const ModelConfig& config, const Grid& grid, const std::vector<double>& eps_list,
                                const Tolerances& tol, std::uint64_t seed, int restarts, int jobs)
{
    if (eps_list.empty())
        throw ParameterError("concentration_sweep: empty epsilon list");
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1]))
            throw ParameterError("concentration_sweep: epsilon list must be strictly decreasing");

    SweepReport rep;
    rep.h = grid.spacing();
    rep.rows.resize(eps_list.size());
    const double c_star = mp_threshold(config);

    auto work = [&](std::size_t k) {
        SweepRow& row = rep.rows[k];
        row.eps = eps_list[k];
        row.c_star = c_star;
        try {
            ModelConfig cfg = config;
            cfg.eps = eps_list[k];
            row.result = solve_model(cfg, grid, tol, seed, restarts, &row.run_energies);
            const DiscreteProblem prob = discretize(cfg, grid);
            row.region = verify_solution_region(row.result, prob);
            const Point x = row.result.argmax_point;
            row.argmax_rescaled = {cfg.eps * x[0], cfg.eps * x[1]};
            row.dist_to_M = std::numeric_limits<double>::infinity();
            for (const auto& m : cfg.potential.minima) {
                const double dy = grid.n_dim() == 1 ? 0.0 : row.argmax_rescaled[1] - m[1];
                row.dist_to_M = std::min(row.dist_to_M, std::hypot(row.argmax_rescaled[0] - m[0], dy));
            }
            row.decay = decay_fit(row.result);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(jobs > 0 ? jobs : 1, eps_list.size()));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w + 1 < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t k; (k = next.fetch_add(1)) < eps_list.size();)
                work(k);
        });
    for (std::size_t k; (k = next.fetch_add(1)) < eps_list.size();)
        work(k);
    for (auto& t : pool)
        t.join();

    rep.all_converged = std::all_of(rep.rows.begin(), rep.rows.end(),
                                    [](const SweepRow& r) { return r.error.empty() && r.result.converged; });
    rep.dist_monotone = rep.all_converged;
    for (std::size_t k = 1; k < rep.rows.size(); ++k)
        if (!(rep.rows[k].dist_to_M <= rep.rows[k - 1].dist_to_M + rep.h))
            rep.dist_monotone = false;
    rep.final_dist_ok = rep.all_converged && rep.rows.back().dist_to_M <= 2.0 * rep.h;
    return rep;
}

LevelReport check_ce_vs_d(const SweepReport& sweep, const SolveResult& autonomous, double c_star)
{
    LevelReport rep;
    rep.d_V0 = autonomous.energy;
    rep.nonincreasing = autonomous.converged;
    rep.below_threshold = autonomous.energy < c_star;
    for (std::size_t k = 0; k < sweep.rows.size(); ++k) {
        const auto& row = sweep.rows[k];
        rep.eps.push_back(row.eps);
        rep.c_eps.push_back(row.result.energy);
        if (!row.error.empty() || !row.result.converged)
            rep.nonincreasing = false;
        if (k > 0 && !(row.result.energy <= rep.c_eps[k - 1] * (1.0 + 1e-9)))
            rep.nonincreasing = false;
        if (!(row.result.energy < c_star))
            rep.below_threshold = false;
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (double e : row.run_energies)
            if (std::isfinite(e)) {
                lo = std::min(lo, e);
                hi = std::max(hi, e);
            }
        if (std::isfinite(lo) && lo > 0.0)
            rep.max_run_spread = std::max(rep.max_run_spread, (hi - lo) / lo);
    }
    if (!rep.c_eps.empty() && rep.d_V0 > 0.0)
        rep.within_5pct = std::abs(rep.c_eps.back() / rep.d_V0 - 1.0) <= 0.05;
    return rep;
}

} // namespace frns
