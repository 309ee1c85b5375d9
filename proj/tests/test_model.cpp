#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>

#include "frns/model.hpp"
#include "oracles.hpp"

using namespace frns;

namespace {

ModelConfig default_model()
{
    ModelConfig c;
    c.frac = {0.5, 1.0, 2};
    c.eps = 0.2;
    c.potential.lambda.kind = Region::Kind::Ball;
    c.potential.lambda.radius = 1.0;
    return c;
}

std::string violation(ModelConfig c)
{
    try {
        validate(c);
    } catch (const ParameterError& e) {
        return e.what();
    }
    return "";
}

Field random_field(const Grid& g, std::mt19937_64& rng, double lo, double hi)
{
    std::uniform_real_distribution<double> d(lo, hi);
    Field f(g);
    for (auto& v : f.values)
        v = d(rng);
    return f;
}

} // namespace

TEST(Validate, DefaultModelPasses)
{
    ModelConfig c = default_model();
    const AssumptionReport r = validate(c);
    EXPECT_GE(r.verified.size(), 8u);
    EXPECT_GT(c.pen.a, 0.0);
}

TEST(Validate, NamesViolatedAssumption)
{
    ModelConfig c = default_model();
    c.potential.V1 = 1.0;
    c.potential.V0 = 1.0;
    EXPECT_EQ(violation(c).rfind("(V1)", 0), 0u) << violation(c);

    c = default_model();
    c.pen.kappa = 1.0;
    EXPECT_EQ(violation(c).rfind("kappa bound", 0), 0u) << violation(c);

    c = default_model();
    c.potential.minima = {{3.0, 0.0}};
    EXPECT_EQ(violation(c).rfind("(V2)", 0), 0u) << violation(c);

    c = default_model();
    c.nonlin.p = 4.5;
    EXPECT_EQ(violation(c).rfind("(f2)", 0), 0u) << violation(c);

    c = default_model();
    c.nonlin.ar_theta = 2.0;
    EXPECT_EQ(violation(c).rfind("(f3)", 0), 0u) << violation(c);

    c = default_model();
    c.eps = 0.0;
    EXPECT_EQ(violation(c).rfind("(eps)", 0), 0u) << violation(c);

    c = default_model();
    c.frac.s = 1.2;
    EXPECT_EQ(violation(c).rfind("(frac)", 0), 0u) << violation(c);
}

TEST(Validate, BoundaryMinimumViolatesV2)
{
    // A well centred on the edge of Lambda attains -V0 on the boundary.
    ModelConfig c = default_model();
    c.potential.minima = {{0.0, 0.0}, {1.0, 0.0}};
    EXPECT_EQ(violation(c).rfind("(V2)", 0), 0u) << violation(c);
}

TEST(Validate, ConstantPotentialFailsV2)
{
    ModelConfig c = default_model();
    c.potential.shape = "constant";
    EXPECT_EQ(violation(c).rfind("(V2)", 0), 0u) << violation(c);
}

TEST(Threshold, MatchesBisectionOracle)
{
    for (double kappa : {3.5, 10.0, 40.0}) {
        ModelConfig c = default_model();
        c.pen.kappa = kappa;
        const double a = solve_penalization_threshold(c);
        const double ref = oracle::penalization_threshold(c.nonlin.lambda, c.nonlin.p, c.frac.critical_exponent(),
                                                          c.potential.V1 / kappa);
        EXPECT_NEAR(a, ref, 1e-14 * ref);
        EXPECT_LE(std::abs(penalization_residual(c, a)), 1e-12);
    }
}

TEST(Penalization, BranchesAreContinuousAtThreshold)
{
    ModelConfig c = default_model();
    validate(c);
    const double a = c.pen.a;
    const Point outside{5.0, 0.0};
    EXPECT_NEAR(g_eval(c, outside, a * (1 - 1e-12)), g_eval(c, outside, a * (1 + 1e-12)), 1e-12 * a);
    EXPECT_NEAR(G_eval(c, outside, a * (1 - 1e-12)), G_eval(c, outside, a * (1 + 1e-12)), 1e-12 * a * a);
    EXPECT_DOUBLE_EQ(g_eval(c, outside, 2.0), c.potential.V1 / c.pen.kappa * 2.0);
    EXPECT_DOUBLE_EQ(g_eval(c, Point{0.0, 0.0}, -1.0), 0.0);
    EXPECT_DOUBLE_EQ(G_eval(c, Point{0.0, 0.0}, -1.0), 0.0);
}

TEST(Penalization, InsideIncludesCriticalTerm)
{
    ModelConfig c = default_model();
    validate(c);
    const double t = 0.7;
    const double expected = c.nonlin.lambda * t * t + std::pow(t, 3.0);
    EXPECT_NEAR(g_eval(c, Point{0.0, 0.0}, t), expected, 1e-15);
}

TEST(Penalization, PrimitiveDifferentiatesToG)
{
    ModelConfig c = default_model();
    validate(c);
    for (bool inside : {true, false})
        for (double t : {1e-3, 0.003, 0.01, 0.5, 2.0}) {
            const double d = 1e-6 * t;
            const double fd = (G_branch(c, inside, t + d) - G_branch(c, inside, t - d)) / (2.0 * d);
            EXPECT_NEAR(fd, g_branch(c, inside, t), 1e-6 * std::max(1e-3, g_branch(c, inside, t)));
        }
}

TEST(Potential, GaussianWellsShape)
{
    PotentialSpec p;
    p.V0 = 0.3;
    p.V1 = 0.3;
    p.top = 0.1;
    p.width = 2.0;
    p.minima = {{1.0, 0.0}};
    EXPECT_NEAR(p({1.0, 0.0}, 2), -0.3, 1e-15);
    EXPECT_NEAR(p({1.0, 2.0}, 2), 0.1 - 0.4 * std::exp(-1.0), 1e-15);
    EXPECT_NEAR(p({1.0, 2.0}, 1), -0.3, 1e-15);
}

TEST(Discretize, RescalesCoordinates)
{
    ModelConfig c = default_model();
    validate(c);
    const Grid g(2, 64, 10.0);
    const DiscreteProblem prob = discretize(c, g);
    for (std::size_t i = 0; i < g.total_points(); i += 37) {
        Point x = g.point(i);
        const Point y{c.eps * x[0], c.eps * x[1]};
        EXPECT_DOUBLE_EQ(prob.potential[i], c.potential(y, 2));
        EXPECT_EQ(prob.inside[i] != 0, c.potential.lambda.contains(y, 2));
    }
    EXPECT_THROW(discretize(c, Grid(1, 64, 10.0)), ParameterError);
}

TEST(Energy, GradientMatchesCentralDifferences)
{
    std::mt19937_64 rng(42);
    for (int n : {1, 2}) {
        ModelConfig c = default_model();
        if (n == 1) {
            c.frac = {0.25, 1.0, 1};
            c.nonlin.q = 3.9;
        }
        validate(c);
        const Grid g(n, n == 1 ? 128 : 32, 8.0);
        const DiscreteProblem prob = discretize(c, g);
        for (int trial = 0; trial < 10; ++trial) {
            const Field u = random_field(g, rng, 0.01, 1.0);
            const Field v = random_field(g, rng, -1.0, 1.0);
            const Field grad = energy_gradient(prob, u);
            const double exact = inner_product(grad, v);
            const double t = 1e-4;
            Field up = u, um = u;
            for (std::size_t i = 0; i < u.size(); ++i) {
                up[i] += t * v[i];
                um[i] -= t * v[i];
            }
            const double fd = (energy(prob, up) - energy(prob, um)) / (2.0 * t);
            EXPECT_NEAR(fd / exact, 1.0, 1e-6) << "N=" << n << " trial " << trial;
        }
    }
}

TEST(Energy, ConfigOverloadsAgree)
{
    ModelConfig c = default_model();
    validate(c);
    const Grid g(2, 32, 8.0);
    std::mt19937_64 rng(3);
    const Field u = random_field(g, rng, 0.0, 1.0);
    const DiscreteProblem prob = discretize(c, g);
    EXPECT_DOUBLE_EQ(energy(c, u, prob.table), energy(prob, u));
    EXPECT_EQ(energy_gradient(c, u, prob.table).values, energy_gradient(prob, u).values);
}
