#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "frns/model.hpp"

namespace frns {

struct Tolerances {
    // Max-norm of the projected gradient relative to the max-norm of u.
    double grad = 1e-6;
    // |<J'(u), u>|
    double nehari = 1e-10;
    int max_iter = 20000;
};

struct SolveResult {
    Field field;
    double energy = 0.0;
    double nehari_residual = 0.0;
    double grad_residual = 0.0;
    // ||A u + V u - g(u)||_2 / ||u||_2 without the sign projection.
    double el_residual = 0.0;
    std::size_t argmax_index = 0;
    Point argmax_point{0.0, 0.0};
    double sup_norm = 0.0;
    double min_value = 0.0;
    int iterations = 0;
    bool converged = false;
    bool collapsed = false;
    std::string status;
    std::vector<double> energy_history;
};

class NoPositivePartError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NoBracketError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// The t > 0 with <J'(t u), t u> = 0.
double nehari_scale(const DiscreteProblem& prob, const Field& u);
double nehari_scale(const DiscreteProblem& prob, const Field& u, const Field& au);
// <J'(u), u>
double nehari_functional(const DiscreteProblem& prob, const Field& u);

struct IterationInfo {
    int iteration = 0;
    double energy = 0.0;
    double grad_residual = 0.0;
    double step = 0.0;
};
using Observer = std::function<void(const IterationInfo&)>;

// Preconditioned projected gradient descent on the Nehari manifold.
SolveResult ground_state(const DiscreteProblem& prob, const Field& init, const Tolerances& tol = {},
                         const Observer& observer = {});

// Width-1 Gaussian centered at the grid point nearest to center.
Field gaussian_bump(const Grid& grid, const Point& center, double width = 1.0);

// Runs from the default initial bump at M_0 / eps, then `restarts` seeded
// randomized starts; returns the lowest-energy run. `all_energies`, if given,
// receives every run's energy (NaN for failures).
SolveResult solve_model(const ModelConfig& config, const Grid& grid, const Tolerances& tol, std::uint64_t seed,
                        int restarts, std::vector<double>* all_energies = nullptr);

struct AutonomousConfig {
    double mu = -0.2;
    FracParams frac;
    NonlinearitySpec nonlin;
};

SolveResult autonomous_ground_state(const AutonomousConfig& config, const Grid& grid, const Field& init,
                                    const Tolerances& tol = {});
SolveResult autonomous_ground_state(const AutonomousConfig& config, const Grid& grid, const Tolerances& tol = {});

double zeta(const ModelConfig& config);
double mp_threshold(const ModelConfig& config);

struct SStarOptions {
    std::size_t points_per_dim = 0;  // 0: 2^20 in 1D, 2048 in 2D
    double half_length = 1.0;
};

struct SStarResult {
    std::vector<double> rho;
    std::vector<double> quotient;
    double min_quotient = 0.0;
    double rho_at_min = 0.0;
    double formula = 0.0;
    // The minimum sits at an end of the rho range.
    bool edge_warning = false;
};

// Rayleigh quotient sigma_s sum |k|^{2s} |u_hat|^2 / |u|_{2*}^2 for the
// bubble family, shifted down by its minimum over the box and clipped at 0
// so the periodic extension stays continuous.
double rayleigh_quotient(const Field& u, const KernelTable& massless, double s);
SStarResult estimate_s_star(const FracParams& frac, const std::vector<double>& rho_values,
                            const SStarOptions& options = {});
// Geometric ladder from 8h to half_length * 0.03^{1/(N-2s)} in steps of sqrt 2.
std::vector<double> default_rho_values(const FracParams& frac, const SStarOptions& options = {});

struct RegionReport {
    double max_outside = 0.0;
    double a = 0.0;
    bool below_threshold = false;
    double sup_norm = 0.0;
    double min_value = 0.0;
    bool nonnegative = false;
};

RegionReport verify_solution_region(const SolveResult& result, const DiscreteProblem& prob);

struct DecayFit {
    double C1 = 0.0;
    double C2 = 0.0;
    double r_squared = 0.0;
    // Smallest C with u <= C e^{-C2 r} on the annulus.
    double envelope_C1 = 0.0;
    bool bound_holds = false;
    std::size_t samples = 0;
};

// Least-squares fit of log u = log C1 - C2 |x - x_max| on the annulus where
// u lies in [1e-8, 1e-2] sup u; distances use the periodic minimum image.
DecayFit decay_fit(const Field& u, std::size_t argmax_index);
DecayFit decay_fit(const SolveResult& result);

struct SweepRow {
    double eps = 0.0;
    SolveResult result;
    std::vector<double> run_energies;
    Point argmax_rescaled{0.0, 0.0};
    double dist_to_M = 0.0;
    DecayFit decay;
    RegionReport region;
    double c_star = 0.0;
    std::string error;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    double h = 0.0;
    bool dist_monotone = false;
    bool final_dist_ok = false;
    bool all_converged = false;
};

// One solve per epsilon, run on up to `jobs` worker threads. Rows come back
// in the order of eps_list.
SweepReport concentration_sweep(const ModelConfig& config, const Grid& grid, const std::vector<double>& eps_list,
                                const Tolerances& tol, std::uint64_t seed, int restarts, int jobs);

struct LevelReport {
    std::vector<double> eps;
    std::vector<double> c_eps;
    double d_V0 = 0.0;
    bool nonincreasing = false;
    bool within_5pct = false;
    bool below_threshold = false;
    // Relative spread between independent runs at each eps, worst case.
    double max_run_spread = 0.0;
};

LevelReport check_ce_vs_d(const SweepReport& sweep, const SolveResult& autonomous, double c_star);

} // namespace frns
