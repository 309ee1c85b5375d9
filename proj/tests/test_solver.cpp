#include <gtest/gtest.h>

#include <cmath>

#include "frns/solver.hpp"
#include "oracles.hpp"

using namespace frns;

namespace {

// 1D, s = 1/4 (critical exponent 4), single well at the origin.
ModelConfig small_model()
{
    ModelConfig c;
    c.frac = {0.25, 1.0, 1};
    c.eps = 0.3;
    c.nonlin.q = 3.9;
    c.potential.lambda.kind = Region::Kind::Ball;
    c.potential.lambda.radius = 1.0;
    validate(c);
    return c;
}

const Grid& small_grid()
{
    static const Grid g(1, 256, 20.0);
    return g;
}

} // namespace

TEST(Nehari, ScaleZeroesTheNehariFunctional)
{
    const ModelConfig c = small_model();
    const DiscreteProblem prob = discretize(c, small_grid());
    for (double amp : {1e-3, 0.1, 1.0, 50.0}) {
        Field u = gaussian_bump(small_grid(), {0.0, 0.0}, 1.5);
        for (auto& v : u.values)
            v *= amp;
        const double t = nehari_scale(prob, u);
        Field tu = u;
        for (auto& v : tu.values)
            v *= t;
        EXPECT_LE(std::abs(nehari_functional(prob, tu)), 1e-12 * penalized_norm_sq(prob, tu)) << "amp=" << amp;
    }
}

TEST(Nehari, RejectsFieldWithoutPositivePart)
{
    const DiscreteProblem prob = discretize(small_model(), small_grid());
    Field u(small_grid(), -1.0);
    EXPECT_THROW(nehari_scale(prob, u), NoPositivePartError);
}

TEST(GroundState, ConvergesToNonnegativeCriticalPoint)
{
    const ModelConfig c = small_model();
    const DiscreteProblem prob = discretize(c, small_grid());
    const SolveResult r = ground_state(prob, gaussian_bump(small_grid(), {0.0, 0.0}));
    ASSERT_TRUE(r.converged) << r.status;
    EXPECT_GT(r.energy, 0.0);
    EXPECT_LT(r.energy, mp_threshold(c));
    EXPECT_LE(r.grad_residual, 1e-6);
    EXPECT_LE(std::abs(r.nehari_residual), 1e-10);
    EXPECT_GE(r.min_value, 0.0);
    EXPECT_LT(r.el_residual, 1e-4);
    EXPECT_NEAR(r.energy, energy(prob, r.field), 1e-14);
    for (std::size_t k = 1; k < r.energy_history.size(); ++k)
        EXPECT_LE(r.energy_history[k], r.energy_history[k - 1] * (1.0 + 1e-12));
    EXPECT_NEAR(r.argmax_point[0], 0.0, small_grid().spacing());
}

TEST(GroundState, IterationCapReportsNonConvergence)
{
    const DiscreteProblem prob = discretize(small_model(), small_grid());
    Tolerances tol;
    tol.max_iter = 2;
    const SolveResult r = ground_state(prob, gaussian_bump(small_grid(), {3.0, 0.0}), tol);
    EXPECT_FALSE(r.converged);
    EXPECT_FALSE(r.status.empty());
}

TEST(GroundState, DeterministicForFixedSeed)
{
    const ModelConfig c = small_model();
    const SolveResult a = solve_model(c, small_grid(), {}, 11, 2);
    const SolveResult b = solve_model(c, small_grid(), {}, 11, 2);
    EXPECT_EQ(a.field.values, b.field.values);
    EXPECT_EQ(a.energy, b.energy);
}

TEST(GroundState, AutonomousLevelBelowPenalizedLevel)
{
    // With a single well the penalized level approaches d_{-V0} from above.
    const ModelConfig c = small_model();
    const SolveResult pen = solve_model(c, small_grid(), {}, 1, 0);
    AutonomousConfig ac{-c.potential.V0, c.frac, c.nonlin};
    const SolveResult aut = autonomous_ground_state(ac, small_grid());
    ASSERT_TRUE(pen.converged && aut.converged);
    EXPECT_LE(aut.energy, pen.energy * (1.0 + 1e-9));
    ac.mu = -1.5;
    EXPECT_THROW(autonomous_ground_state(ac, small_grid()), ParameterError);
}

TEST(Thresholds, MountainPassBoundFormula)
{
    ModelConfig c;
    c.frac = {0.5, 1.0, 2};
    c.potential.V1 = 0.2;
    c.pen.kappa = 10.0;
    const double z = 1.0 - 0.2 * 1.1;
    EXPECT_DOUBLE_EQ(zeta(c), z);
    EXPECT_NEAR(mp_threshold(c), 0.25 * std::pow(z * oracle::s_star(2, 0.5), 2.0), 1e-14);
    c.potential.V1 = 0.95;
    EXPECT_THROW(mp_threshold(c), ParameterError);
}

TEST(SStar, RayleighQuotientScaleInvariant)
{
    const FracParams fp{0.5, 1.0, 2};
    const Grid g(2, 128, 1.0);
    const KernelTable t = build_fractional_laplacian(g, 0.5);
    Field u = gaussian_bump(g, {0.0, 0.0}, 0.1);
    const double q1 = rayleigh_quotient(u, t, 0.5);
    for (auto& v : u.values)
        v *= 7.0;
    EXPECT_NEAR(rayleigh_quotient(u, t, 0.5), q1, 1e-12 * q1);
}

TEST(SStar, SmallGridEstimateNearFormula)
{
    const FracParams fp{0.5, 1.0, 2};
    SStarOptions opt;
    opt.points_per_dim = 1024;
    const SStarResult r = estimate_s_star(fp, default_rho_values(fp, opt), opt);
    EXPECT_NEAR(r.formula, std::sqrt(M_PI), 1e-14);
    EXPECT_NEAR(r.min_quotient / r.formula, 1.0, 0.05);
    EXPECT_EQ(r.rho.size(), r.quotient.size());
    EXPECT_THROW(estimate_s_star(FracParams{0.5, 1.0, 1}, {0.1}), ParameterError);
}

TEST(SStar, DefaultLadder)
{
    const FracParams fp{0.25, 1.0, 1};
    SStarOptions opt;
    opt.points_per_dim = 65536;
    const auto rho = default_rho_values(fp, opt);
    ASSERT_GE(rho.size(), 2u);
    EXPECT_NEAR(rho.front(), 8.0 * 2.0 / 65536.0, 1e-15);
    EXPECT_NEAR(rho[1] / rho[0], std::sqrt(2.0), 1e-12);
    EXPECT_LE(rho.back(), std::pow(0.03, 2.0) * (1.0 + 1e-12));
}

TEST(Decay, RecoversExponentialRate)
{
    const Grid g(2, 128, 20.0);
    const std::size_t c = g.flat_index(64, 64);
    const Field u = sample(g, [](const Point& x) { return std::exp(-0.8 * std::hypot(x[0], x[1])); });
    const DecayFit fit = decay_fit(u, c);
    EXPECT_NEAR(fit.C2, 0.8, 1e-10);
    EXPECT_NEAR(fit.C1, 1.0, 1e-9);
    EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
    EXPECT_TRUE(fit.bound_holds);
}

TEST(Decay, FlatFieldHasNoAnnulus)
{
    const Grid g(1, 64, 5.0);
    EXPECT_THROW(decay_fit(Field(g, 1.0), 0), NumericalError);
}

TEST(Region, ReportFlagsLargeOutsideValues)
{
    const ModelConfig c = small_model();
    const DiscreteProblem prob = discretize(c, small_grid());
    SolveResult r;
    r.field = Field(small_grid(), 0.0);
    r.field[0] = 0.5;
    const RegionReport rep = verify_solution_region(r, prob);
    EXPECT_FALSE(rep.below_threshold);
    EXPECT_DOUBLE_EQ(rep.max_outside, 0.5);
    EXPECT_TRUE(rep.nonnegative);
}

TEST(Sweep, RejectsUnsortedEpsilon)
{
    EXPECT_THROW(concentration_sweep(small_model(), small_grid(), {0.1, 0.2, 0.05}, {}, 1, 0, 1), ParameterError);
}
