#include "frns/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "frns/config.hpp"
#include "frns/csv.hpp"
#include "frns/kernel_suite.hpp"
#include "frns/solver.hpp"
#include "frns/svg.hpp"
#include "periodic.hpp"

#ifndef FRNS_VERSION
#define FRNS_VERSION "0.0.0"
#endif

namespace frns::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    std::vector<double> eps;
    std::optional<int> jobs;
    int n_dim = 0;
    double s = 0.0;
    bool corrupt_sigma = false;
};

// Files written by one command, recorded in the manifest.
struct Emitter {
    fs::path dir;
    std::string hash;
    std::uint64_t seed = 0;
    std::vector<std::string> outputs;

    std::string comment() const { return std::string("frns ") + FRNS_VERSION + " config_sha256=" + hash; }

    void csv(const CsvTable& t, const std::string& name)
    {
        t.write((dir / name).string());
        outputs.push_back(name);
    }
    void svg(const SvgPlot& p, const std::string& name)
    {
        p.write((dir / name).string());
        outputs.push_back(name);
    }
    void manifest()
    {
        nlohmann::ordered_json j;
        j["config_sha256"] = hash;
        j["seed"] = seed;
        j["version"] = FRNS_VERSION;
        j["outputs"] = outputs;
        std::ofstream f(dir / "manifest.json", std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
        f << j.dump(2) << "\n";
    }
};

Emitter make_emitter(const std::string& out, const std::string& canonical, std::uint64_t seed)
{
    Emitter e;
    e.dir = out;
    fs::create_directories(e.dir);
    e.hash = sha256_hex(canonical);
    e.seed = seed;
    return e;
}

RunConfig load(const Options& o)
{
    if (o.config.empty())
        throw ConfigParseError("--config is required", 0);
    RunConfig cfg = load_config(o.config);
    if (o.seed)
        cfg.seed = *o.seed;
    if (o.jobs)
        cfg.jobs = *o.jobs;
    return cfg;
}

using Num = CsvTable;

void add_diag(CsvTable& t, const std::string& q, double v, const std::string& unit)
{
    t.add_row({q, Num::number(v), unit});
}

void add_diag(CsvTable& t, const std::string& q, bool v)
{
    t.add_row({q, Num::boolean(v), "1"});
}

void add_diag(CsvTable& t, const std::string& q, const std::string& v)
{
    t.add_row({q, v, "text"});
}

int cmd_validate(const Options& o)
{
    RunConfig cfg = load(o);
    const AssumptionReport rep = validate(cfg.model);
    const Grid grid = cfg.grid();
    for (const auto& v : rep.verified)
        std::cout << "ok      " << v << "\n";
    for (const auto& w : rep.warnings)
        std::cout << "warning " << w << "\n";
    std::cout << "grid    " << grid.n_dim() << "D, " << grid.points_per_dim() << " points per axis, L = "
              << grid.half_length() << ", h = " << grid.spacing() << "\n";
    std::cout << "a       " << cfg.model.pen.a << "\n";
    std::cout << "c_star  " << mp_threshold(cfg.model) << "\n";
    return ok;
}

int cmd_kernels(const Options& o)
{
    RunConfig cfg = load(o);
    cfg.model.frac.validate();
    Emitter em = make_emitter(o.out, canonical_config(cfg), cfg.seed);
    const auto checks = run_kernel_suite(cfg.model.frac, o.corrupt_sigma ? 1.01 : 1.0);
    CsvTable t(em.comment(), {"check", "computed", "expected", "tolerance", "error", "pass"});
    bool all = true;
    for (const auto& c : checks) {
        t.add_row({c.name, Num::number(c.computed), Num::number(c.expected), Num::number(c.tolerance),
                   Num::number(c.error), Num::boolean(c.passed)});
        std::cout << (c.passed ? "pass " : "FAIL ") << c.name << "  error " << c.error << " (tol " << c.tolerance
                  << ")\n";
        all = all && c.passed;
    }
    em.csv(t, "kernels.csv");
    em.manifest();
    return all ? ok : numerical_failure;
}

// Maximum of u over periodic distance shells of width h around the argmax.
SvgSeries radial_profile(const SolveResult& r)
{
    const Field& u = r.field;
    const double h = u.grid.spacing();
    std::map<long, double> bins;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = detail::periodic_distance(u.grid, u.grid.point(i), r.argmax_point);
        auto& b = bins[std::lround(d / h)];
        b = std::max(b, u[i]);
    }
    SvgSeries s;
    for (const auto& [k, v] : bins) {
        s.x.push_back(k * h);
        s.y.push_back(v);
    }
    return s;
}

int cmd_solve(const Options& o)
{
    RunConfig cfg = load(o);
    if (o.eps.size() == 1)
        cfg.model.eps = o.eps.front();
    else if (!o.eps.empty())
        throw ParameterError("solve takes a single --eps value");
    const AssumptionReport assumptions = validate(cfg.model);
    for (const auto& w : assumptions.warnings)
        std::cerr << "warning: " << w << "\n";
    const Grid grid = cfg.grid();
    Emitter em = make_emitter(o.out, canonical_config(cfg), cfg.seed);

    std::vector<double> runs;
    const SolveResult res = solve_model(cfg.model, grid, cfg.tol, cfg.seed, cfg.restarts, &runs);
    const DiscreteProblem prob = discretize(cfg.model, grid);
    const RegionReport region = verify_solution_region(res, prob);
    const double c_star = mp_threshold(cfg.model);

    std::vector<std::string> header{"x [length]"};
    if (grid.n_dim() == 2)
        header.push_back("y [length]");
    header.push_back("u [1]");
    CsvTable sol(em.comment(), header);
    for (std::size_t i = 0; i < grid.total_points(); ++i) {
        const Point x = grid.point(i);
        if (grid.n_dim() == 1)
            sol.add_row({Num::number(x[0]), Num::number(res.field[i])});
        else
            sol.add_row({Num::number(x[0]), Num::number(x[1]), Num::number(res.field[i])});
    }
    em.csv(sol, "solution.csv");

    CsvTable d(em.comment(), {"quantity", "value", "unit"});
    add_diag(d, "status", res.status);
    add_diag(d, "converged", res.converged);
    add_diag(d, "iterations", static_cast<double>(res.iterations), "1");
    add_diag(d, "energy_upper_estimate", res.energy, "energy");
    add_diag(d, "c_star", c_star, "energy");
    add_diag(d, "zeta", zeta(cfg.model), "1");
    add_diag(d, "energy_below_c_star", res.energy > 0.0 && res.energy < c_star);
    add_diag(d, "nehari_residual", res.nehari_residual, "energy");
    add_diag(d, "grad_residual", res.grad_residual, "1");
    add_diag(d, "el_residual", res.el_residual, "1");
    add_diag(d, "argmax_x", res.argmax_point[0], "length");
    if (grid.n_dim() == 2)
        add_diag(d, "argmax_y", res.argmax_point[1], "length");
    add_diag(d, "sup_norm", res.sup_norm, "1");
    add_diag(d, "min_value", res.min_value, "1");
    add_diag(d, "nonnegative", region.nonnegative);
    add_diag(d, "max_outside_Lambda", region.max_outside, "1");
    add_diag(d, "a_threshold", region.a, "1");
    add_diag(d, "outside_below_a", region.below_threshold);
    const KappaReport kr = kappa_s_detail(cfg.model.frac.s);
    add_diag(d, "kappa_s", kr.integral, "1");
    add_diag(d, "sigma_s", sigma_s(cfg.model.frac.s), "1");
    add_diag(d, "kappa_s_note", std::string("kappa_s is computed from its integral and equals sigma_s, which is 1 only at s = 1/2"));
    for (std::size_t k = 0; k < runs.size(); ++k)
        add_diag(d, "run_energy_" + std::to_string(k), runs[k], "energy");
    try {
        const DecayFit fit = decay_fit(res);
        add_diag(d, "decay_C1", fit.C1, "1");
        add_diag(d, "decay_C2", fit.C2, "1/length");
        add_diag(d, "decay_r_squared", fit.r_squared, "1");
        add_diag(d, "decay_envelope_C1", fit.envelope_C1, "1");
        add_diag(d, "decay_bound_holds", fit.bound_holds);
    } catch (const NumericalError& e) {
        add_diag(d, "decay_fit_error", std::string(e.what()));
    }
    for (const auto& w : assumptions.warnings)
        add_diag(d, "warning", w);
    em.csv(d, "diagnostics.csv");

    if (cfg.svg) {
        SvgPlot p;
        p.title = "Radial profile around the maximum";
        p.x_label = "distance from argmax";
        p.y_label = "max u on shell";
        p.log_y = true;
        p.series.push_back(radial_profile(res));
        em.svg(p, "profile.svg");
    }
    em.manifest();

    std::cout << "status " << res.status << "\nenergy " << res.energy << " (c_star " << c_star << ")\n"
              << "nehari " << res.nehari_residual << "  grad " << res.grad_residual << "  iterations "
              << res.iterations << "\n";
    if (!region.below_threshold)
        std::cout << "note: max outside Lambda " << region.max_outside << " is not below a = " << region.a << "\n";
    return res.converged ? ok : numerical_failure;
}

int cmd_sweep(const Options& o)
{
    RunConfig cfg = load(o);
    if (!o.eps.empty())
        cfg.sweep_eps = o.eps;
    if (cfg.sweep_eps.size() < 3)
        throw ParameterError("sweep needs at least 3 epsilon values");
    for (double e : cfg.sweep_eps) {
        ModelConfig m = cfg.model;
        m.eps = e;
        validate(m);
    }
    validate(cfg.model);
    const Grid grid = cfg.grid();
    Emitter em = make_emitter(o.out, canonical_config(cfg), cfg.seed);
    const int jobs = cfg.jobs > 0 ? cfg.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    const SweepReport sweep =
        concentration_sweep(cfg.model, grid, cfg.sweep_eps, cfg.tol, cfg.seed, cfg.restarts, jobs);

    AutonomousConfig ac;
    ac.mu = cfg.model.potential(cfg.model.potential.minima.front(), grid.n_dim());
    ac.frac = cfg.model.frac;
    ac.nonlin = cfg.model.nonlin;
    const SolveResult autonomous = autonomous_ground_state(ac, grid, cfg.tol);
    const double c_star = mp_threshold(cfg.model);
    const LevelReport level = check_ce_vs_d(sweep, autonomous, c_star);

    std::vector<std::string> header{"eps [1]", "energy [energy]", "c_star [energy]", "d_V0_estimate [energy]",
                                    "argmax_x [length]"};
    if (grid.n_dim() == 2)
        header.push_back("argmax_y [length]");
    for (const char* h : {"dist_to_M_rescaled [length]", "decay_C2 [1/length]", "decay_r_squared [1]",
                          "max_outside_Lambda [1]", "a_threshold [1]", "converged [1]", "error [text]"})
        header.push_back(h);
    CsvTable t(em.comment(), header);
    SvgSeries dist_series;
    dist_series.markers = true;
    for (const auto& r : sweep.rows) {
        std::vector<std::string> row{Num::number(r.eps), Num::number(r.result.energy), Num::number(r.c_star),
                                     Num::number(level.d_V0), Num::number(r.result.argmax_point[0])};
        if (grid.n_dim() == 2)
            row.push_back(Num::number(r.result.argmax_point[1]));
        row.push_back(Num::number(r.dist_to_M));
        row.push_back(Num::number(r.decay.C2));
        row.push_back(Num::number(r.decay.r_squared));
        row.push_back(Num::number(r.region.max_outside));
        row.push_back(Num::number(r.region.a));
        row.push_back(Num::boolean(r.error.empty() && r.result.converged));
        row.push_back(r.error);
        t.add_row(row);
        dist_series.x.push_back(r.eps);
        dist_series.y.push_back(r.dist_to_M);
    }
    em.csv(t, "sweep.csv");

    const SweepRow& last = sweep.rows.back();
    const bool decay_ok = std::all_of(sweep.rows.begin(), sweep.rows.end(), [](const SweepRow& r) {
        return r.decay.C2 > 0.0 && r.decay.r_squared >= 0.95;
    });
    struct Check {
        std::string name;
        bool pass;
    };
    const std::vector<Check> checks{
        {"all_converged", sweep.all_converged},
        {"autonomous_converged", autonomous.converged},
        {"dist_nonincreasing_within_h", sweep.dist_monotone},
        {"final_dist_within_2h", sweep.final_dist_ok},
        {"final_max_outside_below_a", last.error.empty() && last.region.below_threshold},
        {"decay_C2_positive_r2_0.95", decay_ok},
        {"c_eps_nonincreasing", level.nonincreasing},
        {"c_eps_below_c_star", level.below_threshold},
        {"final_c_eps_within_5pct_of_d_V0", level.within_5pct},
    };
    CsvTable c(em.comment(), {"check", "pass"});
    bool all = true;
    for (const auto& ch : checks) {
        c.add_row({ch.name, Num::boolean(ch.pass)});
        std::cout << (ch.pass ? "pass " : "FAIL ") << ch.name << "\n";
        all = all && ch.pass;
    }
    em.csv(c, "sweep_checks.csv");

    if (cfg.svg) {
        SvgPlot p;
        p.title = "Distance of the rescaled maximum to the potential minima";
        p.x_label = "eps";
        p.y_label = "dist(eps x_eps, M)";
        p.series.push_back(dist_series);
        em.svg(p, "concentration.svg");
    }
    em.manifest();
    std::cout << "d_V0 " << level.d_V0 << "  c_eps(final) " << last.result.energy << "  c_star " << c_star << "\n";
    return all ? ok : numerical_failure;
}

int cmd_sstar(const Options& o)
{
    FracParams frac;
    if (!o.config.empty()) {
        const RunConfig cfg = load(o);
        frac = cfg.model.frac;
    }
    if (o.n_dim != 0)
        frac.n_dim = o.n_dim;
    if (o.s != 0.0)
        frac.s = o.s;
    frac.m = 1.0;
    frac.validate();
    if (!(frac.n_dim > 2.0 * frac.s))
        throw ParameterError("sstar requires N > 2s");

    std::ostringstream canon;
    canon << "sstar N=" << frac.n_dim << " s=" << CsvTable::number(frac.s) << "\n";
    Emitter em = make_emitter(o.out, canon.str(), 0);
    const SStarResult r = estimate_s_star(frac, default_rho_values(frac));
    CsvTable t(em.comment(), {"rho [length]", "rayleigh_quotient [1]", "formula [1]", "relative_error [1]"});
    for (std::size_t i = 0; i < r.rho.size(); ++i)
        t.add_row({Num::number(r.rho[i]), Num::number(r.quotient[i]), Num::number(r.formula),
                   Num::number(r.quotient[i] / r.formula - 1.0)});
    em.csv(t, "sstar.csv");
    em.manifest();
    const double rel = r.min_quotient / r.formula - 1.0;
    std::cout << "S_* formula " << r.formula << "  min quotient " << r.min_quotient << " at rho " << r.rho_at_min
              << "  relative " << rel << "\n";
    if (r.edge_warning)
        std::cout << "warning: minimum at an end of the rho range\n";
    return std::abs(rel) <= 0.05 ? ok : numerical_failure;
}

} // namespace

int run(int argc, char** argv)
{
    CLI::App app{"Ground states of fractional relativistic Schroedinger equations", "frns"};
    app.set_version_flag("--version", FRNS_VERSION);
    app.require_subcommand(1);
    Options o;

    auto common = [&o](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", o.config, "config file")->check(CLI::ExistingFile);
        if (needs_config)
            c->required();
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--seed", o.seed, "override solver.seed");
        sub->add_option("--jobs", o.jobs, "override sweep.jobs")->check(CLI::PositiveNumber);
    };
    auto* v = app.add_subcommand("validate", "check the model assumptions");
    common(v, true);
    auto* k = app.add_subcommand("kernels", "run the kernel identity suite");
    common(k, true);
    k->add_flag("--test-corrupt-sigma", o.corrupt_sigma)->group("");
    auto* s = app.add_subcommand("solve", "compute a ground state");
    common(s, true);
    s->add_option("--eps", o.eps, "override model.eps")->delimiter(',');
    auto* w = app.add_subcommand("sweep", "concentration sweep over epsilon");
    common(w, true);
    w->add_option("--eps", o.eps, "epsilon list, comma separated")->delimiter(',');
    auto* st = app.add_subcommand("sstar", "estimate the sharp trace constant");
    common(st, false);
    st->add_option("--n-dim", o.n_dim, "dimension N");
    st->add_option("--s", o.s, "fractional order s");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return parse_error;
    }

    try {
        if (v->parsed())
            return cmd_validate(o);
        if (k->parsed())
            return cmd_kernels(o);
        if (s->parsed())
            return cmd_solve(o);
        if (w->parsed())
            return cmd_sweep(o);
        return cmd_sstar(o);
    } catch (const ConfigParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return parse_error;
    } catch (const ParameterError& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return invalid_parameters;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return invalid_parameters;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return numerical_failure;
    }
}

} // namespace frns::cli
