#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fields.hpp"
#include "mlap/eigen.hpp"
#include "mlap/errors.hpp"
#include "mlap/mlaplacian.hpp"
#include "oracles.hpp"

namespace {

using mlap::Domain;
using mlap::GridFunction;
constexpr double kPi = std::numbers::pi;

TEST(FirstEigenpair, LinearCaseMatchesPiSquared) {
    const auto pair = mlap::first_eigenpair(mlap::make_graded_grid(2049, 1.0), 2.0);
    EXPECT_NEAR(pair.eigenvalue, kPi * kPi, 1e-4 * kPi * kPi);
    for (std::size_t i = 0; i < pair.eigenfunction.size(); ++i) {
        EXPECT_NEAR(pair.eigenfunction[i], std::sin(kPi * pair.eigenfunction.grid->node(i)), 1e-5);
    }
}

TEST(FirstEigenpair, NonlinearCasesMatchClosedFormAndShooting) {
    for (double m : {1.5, 3.0, 4.0}) {
        const auto pair = mlap::first_eigenpair(mlap::make_graded_grid(2049, 1.0), m);
        const double closed = oracle::eigenvalue_closed_form(m);
        EXPECT_NEAR(pair.eigenvalue / closed, 1.0, 1e-2) << "m=" << m;
    }
    const auto pair = mlap::first_eigenpair(mlap::make_graded_grid(2049, 1.0), 3.0);
    EXPECT_NEAR(pair.eigenvalue / oracle::shooting_eigenvalue(3.0, 1e-5), 1.0, 1e-2);
}

TEST(FirstEigenpair, EigenfunctionIsNormalizedPositiveAndUnimodal) {
    for (double m : {1.5, 2.0, 3.0}) {
        const auto pair = mlap::first_eigenpair(mlap::make_graded_grid(513, 2.0), m);
        const auto& phi = pair.eigenfunction;
        EXPECT_DOUBLE_EQ(phi.max_abs(), 1.0);
        EXPECT_TRUE(phi.has_dirichlet_zeros());
        const std::size_t mid = phi.size() / 2;
        for (std::size_t i = 1; i + 1 < phi.size(); ++i) {
            EXPECT_GT(phi[i], 0.0);
            if (i < mid) {
                EXPECT_LT(phi[i], phi[i + 1]);
            }
            if (i > mid) {
                EXPECT_GT(phi[i], phi[i + 1]);
            }
        }
        EXPECT_LE(pair.residual, 1e-6) << "m=" << m;
    }
}

TEST(FirstEigenpair, EigenvalueMinimizesRayleighQuotient) {
    std::mt19937_64 rng(5);
    for (double m : {1.5, 2.0, 3.0}) {
        const auto g = mlap::make_graded_grid(257, 2.0);
        const auto pair = mlap::first_eigenpair(g, m);
        EXPECT_NEAR(mlap::rayleigh_quotient(pair.eigenfunction, m), pair.eigenvalue, 1e-10 * pair.eigenvalue);
        for (int trial = 0; trial < 20; ++trial) {
            const auto v = fields::random_smooth(g, rng);
            EXPECT_GE(mlap::rayleigh_quotient(v, m), pair.eigenvalue * (1.0 - 1e-10));
        }
    }
}

TEST(FirstEigenpair, ResultDoesNotDependOnThePositiveStart) {
    std::mt19937_64 rng(8);
    const auto g = mlap::make_graded_grid(257, 2.0);
    const double tol = 1e-10;
    for (double m : {2.0, 3.0}) {
        const auto bump = GridFunction::sample(g, [](double x, double) { return std::pow(x * (1 - x), 3.0); });
        GridFunction noisy = fields::random_positive(g, rng, 0.5, 1.5);
        for (std::size_t i = 1; i + 1 < g->size(); ++i) noisy[i] *= std::sin(kPi * g->node(i));
        const auto a = mlap::first_eigenpair(g, m, tol, {}, bump);
        const auto b = mlap::first_eigenpair(g, m, tol, {}, noisy);
        EXPECT_NEAR(a.eigenvalue, b.eigenvalue, 10 * tol * a.eigenvalue) << "m=" << m;
        EXPECT_LE(mlap::max_abs_difference(a.eigenfunction, b.eigenfunction), 1e-4);
    }
}

TEST(FirstEigenpair, BallEigenvalues) {
    // N = 3: phi = sin(pi r) / r with lambda = pi^2. N = 2: j_{0,1}^2.
    const auto three = mlap::first_eigenpair(mlap::make_graded_grid(2049, 1.5, Domain::ball(3)), 2.0);
    EXPECT_NEAR(three.eigenvalue, kPi * kPi, 1e-3 * kPi * kPi);
    const double j01 = 2.404825557695773;
    const auto two = mlap::first_eigenpair(mlap::make_graded_grid(2049, 1.5, Domain::ball(2)), 2.0);
    EXPECT_NEAR(two.eigenvalue, j01 * j01, 1e-3 * j01 * j01);
}

TEST(FirstEigenpair, SignChangingStartIsRejected) {
    const auto g = mlap::make_graded_grid(257, 1.0);
    const auto start = GridFunction::sample(g, [](double x, double) { return std::sin(2 * kPi * x); });
    EXPECT_THROW(mlap::first_eigenpair(g, 2.0, 1e-12, {}, start), mlap::SignChange);
}

TEST(FirstEigenpair, RejectsBadArguments) {
    const auto g = mlap::make_graded_grid(65, 1.0);
    EXPECT_THROW(mlap::first_eigenpair(g, 1.0), mlap::Error);
    EXPECT_THROW(mlap::first_eigenpair(g, 2.0, 0.0), mlap::Error);
    EXPECT_THROW(mlap::first_eigenpair(g, 2.0, 1e-14, {}, std::nullopt, 1), mlap::NonConvergence);
}

TEST(RayleighQuotient, SineOnUniformGrid) {
    const auto g = mlap::make_graded_grid(1025, 1.0);
    const auto v = GridFunction::sample(g, [](double x, double) { return std::sin(kPi * x); });
    EXPECT_NEAR(mlap::rayleigh_quotient(v, 2.0), kPi * kPi, 1e-4);
}

}  // namespace
