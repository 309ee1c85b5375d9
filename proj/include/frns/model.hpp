#pragma once

#include <string>
#include <vector>

#include "frns/grid.hpp"
#include "frns/spectral_operator.hpp"
#include "frns/specfun.hpp"

namespace frns {

// Axis-aligned box [lo, hi] or ball |x - center| < radius; the second
// coordinate is ignored in 1D.
struct Region {
    enum class Kind { Box, Ball };
    Kind kind = Kind::Ball;
    Point lo{-1.0, -1.0};
    Point hi{1.0, 1.0};
    Point center{0.0, 0.0};
    double radius = 1.0;

    bool contains(const Point& x, int n_dim) const;
    // Evenly spaced points on the boundary (count per face or along the circle).
    std::vector<Point> boundary_samples(int n_dim, int count) const;
    // A point set covering the closed region on a regular lattice.
    std::vector<Point> interior_samples(int n_dim, int per_axis) const;
    // Distance from x to the region (0 inside).
    double distance(const Point& x, int n_dim) const;
};

struct PotentialSpec {
    // "gaussian_wells": top - (top + V0) max_j exp(-|x - M_j|^2 / width^2),
    //                   combined by min with decoy wells of depth V1.
    // "constant":       V = -V0 everywhere.
    std::string shape = "gaussian_wells";
    double V0 = 0.2;
    double V1 = 0.2;
    double top = 0.0;
    double width = 1.0;
    Region lambda;
    std::vector<Point> minima{{0.0, 0.0}};
    std::vector<Point> decoys;

    double operator()(const Point& x, int n_dim) const;
};

struct NonlinearitySpec {
    double lambda = 5.0;
    double p = 3.0;
    double ar_theta = 3.0;
    double q = 3.5;

    double f(double t) const;
    double F(double t) const;
};

struct PenalizationSpec {
    double kappa = 10.0;
    double a = 0.0;
};

struct ModelConfig {
    FracParams frac;
    double eps = 0.2;
    PotentialSpec potential;
    NonlinearitySpec nonlin;
    PenalizationSpec pen;
};

// Smallest positive root a of f(a) + a^{2*-1} = (V1/kappa) a, by bisection
// then Newton. Throws ParameterError naming "threshold a" when none exists.
double solve_penalization_threshold(const ModelConfig& config);
double penalization_residual(const ModelConfig& config, double a);

// g and G at the original-scale point x (no epsilon rescaling).
double g_eval(const ModelConfig& config, const Point& x, double t);
double G_eval(const ModelConfig& config, const Point& x, double t);
double g_branch(const ModelConfig& config, bool inside, double t);
double G_branch(const ModelConfig& config, bool inside, double t);

struct AssumptionReport {
    std::vector<std::string> verified;
    std::vector<std::string> warnings;
};

// Checks every model assumption; throws ParameterError whose message starts
// with the violated assumption's name. Fills in pen.a when it is zero.
AssumptionReport validate(ModelConfig& config);

// The model sampled on a grid in stretched coordinates x (V evaluated at eps x).
// The autonomous problem uses a constant potential and inside == true everywhere.
struct DiscreteProblem {
    KernelTable table;
    std::vector<double> potential;
    std::vector<unsigned char> inside;
    NonlinearitySpec nonlin;
    double crit = 4.0;
    double V1 = 0.2;
    double kappa = 10.0;
    double a = 0.0;

    double g(std::size_t i, double t) const;
    double G(std::size_t i, double t) const;
    const Grid& grid() const { return table.grid(); }
};

DiscreteProblem discretize(const ModelConfig& config, const Grid& grid);
DiscreteProblem discretize_autonomous(const FracParams& frac, const NonlinearitySpec& nonlin, double mu,
                                      const Grid& grid);

double energy(const DiscreteProblem& prob, const Field& u);
// The same energy reusing a precomputed A u.
double energy(const DiscreteProblem& prob, const Field& u, const Field& au);
Field energy_gradient(const DiscreteProblem& prob, const Field& u);
Field energy_gradient(const DiscreteProblem& prob, const Field& u, const Field& au);

double energy(const ModelConfig& config, const Field& u, const KernelTable& table);
Field energy_gradient(const ModelConfig& config, const Field& u, const KernelTable& table);

// <A u, u> + sum V u^2 h^N
double penalized_norm_sq(const DiscreteProblem& prob, const Field& u);

} // namespace frns
