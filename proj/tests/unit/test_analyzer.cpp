#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fields.hpp"
#include "mlap/analyzer.hpp"
#include "mlap/errors.hpp"
#include "mlap/solver.hpp"
#include "oracles.hpp"

namespace {

using mlap::Domain;
using mlap::FitWindow;
using mlap::GridFunction;
using mlap::Verdict;

GridFunction of_delta(const mlap::GridPtr& g, const std::function<double(double)>& f) {
    return GridFunction::sample(g, [&](double, double d) { return f(d); });
}

TEST(FitBoundaryExponent, ExactPowerLawsAreRecovered) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> exponent(0.2, 1.5);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    const auto g = mlap::make_graded_grid(2049, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double gamma = exponent(rng);
        const double c = scale(rng);
        const auto u = of_delta(g, [&](double d) { return c * std::pow(d, gamma); });
        const auto fit = mlap::fit_boundary_exponent(u, mlap::default_fit_window(*g));
        EXPECT_NEAR(fit.exponent, gamma, 1e-10);
        EXPECT_NEAR(fit.constant, c, 1e-8 * c);
        EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
        EXPECT_GE(fit.samples, 10u);
    }
}

TEST(FitBoundaryExponent, ScalingLeavesExponentUnchanged) {
    std::mt19937_64 rng(4);
    const auto g = mlap::make_graded_grid(1025, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        auto u = fields::random_positive(g, rng, 0.5, 1.5);
        for (std::size_t i = 1; i + 1 < g->size(); ++i) u[i] *= std::pow(g->delta(i), 0.7);
        GridFunction scaled = u;
        for (double& v : scaled.values) v *= 37.0;
        const FitWindow w = mlap::default_fit_window(*g);
        const auto a = mlap::fit_boundary_exponent(u, w);
        const auto b = mlap::fit_boundary_exponent(scaled, w);
        EXPECT_NEAR(a.exponent, b.exponent, 1e-12);
        EXPECT_NEAR(b.constant / a.constant, 37.0, 1e-9);
    }
}

TEST(FitBoundaryExponent, LogCorrectedFieldApproachesOneFromBelow) {
    const auto g = mlap::make_graded_grid(8193, 3.0);
    const auto u = of_delta(g, [](double d) { return d * std::pow(std::log(1.0 / d), 2.0 / 3.0); });
    const double outer = mlap::fit_boundary_exponent(u, {1e-4, 1e-2}).exponent;
    const double inner = mlap::fit_boundary_exponent(u, {1e-10, 1e-7}).exponent;
    EXPECT_LT(outer, inner);
    EXPECT_LT(inner, 1.0);
    EXPECT_GT(outer, 0.8);
}

TEST(FitLogCorrection, ExactLogModels) {
    const auto g = mlap::make_graded_grid(8193, 3.0);
    for (double s : {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.5}) {
        const auto u = of_delta(g, [&](double d) { return 1.7 * d * std::pow(std::log(1.0 / d), s); });
        const auto fit = mlap::fit_log_correction(u, {1e-8, 1e-2});
        ASSERT_TRUE(fit.log_exponent);
        EXPECT_NEAR(*fit.log_exponent, s, 1e-9);
        EXPECT_NEAR(fit.constant, 1.7, 1e-8);
    }
}

TEST(FitLogCorrection, OffsetModelIsRecovered) {
    const auto g = mlap::make_graded_grid(8193, 3.0);
    const auto u = of_delta(g, [](double d) { return d * (2.0 * std::cbrt(std::log(1.0 / d)) - 1.5); });
    const auto fit = mlap::fit_log_correction_offset(u, {1e-8, 1e-2});
    ASSERT_TRUE(fit.log_exponent && fit.offset);
    EXPECT_NEAR(*fit.log_exponent, 1.0 / 3.0, 1e-5);
    EXPECT_NEAR(fit.constant, 2.0, 1e-4);
    EXPECT_NEAR(*fit.offset, -1.5, 1e-4);
    // The plain log fit is biased by the offset.
    EXPECT_GT(std::abs(*mlap::fit_log_correction(u, {1e-8, 1e-2}).log_exponent - 1.0 / 3.0), 0.1);
}

TEST(FitBoundaryAuto, RoutesLogFieldsAndKeepsPowerFields) {
    const auto g = mlap::make_graded_grid(8193, 3.0);
    const FitWindow w{1e-9, 1e-3};
    const auto log_field = of_delta(g, [](double d) { return d * std::pow(std::log(1.0 / d), 2.0 / 3.0); });
    const auto routed = mlap::fit_boundary_auto(log_field, w);
    ASSERT_TRUE(routed.log_exponent);
    EXPECT_NEAR(*routed.log_exponent, 2.0 / 3.0, 1e-9);

    for (double gamma : {0.5, 2.0 / 3.0, 0.95, 1.0}) {
        const auto power = of_delta(g, [&](double d) { return std::pow(d, gamma); });
        const auto fit = mlap::fit_boundary_auto(power, w);
        EXPECT_FALSE(fit.log_exponent) << gamma;
        EXPECT_NEAR(fit.exponent, gamma, 1e-10);
    }
}

TEST(FitErrors, WindowAndPositivity) {
    const auto g = mlap::make_graded_grid(257, 2.0);
    const auto u = of_delta(g, [](double d) { return d; });
    EXPECT_THROW(mlap::fit_boundary_exponent(u, {0.1, 0.1000001}), mlap::InsufficientWindow);
    EXPECT_THROW(mlap::fit_boundary_exponent(u, {0.0, 0.1}), mlap::InsufficientWindow);
    EXPECT_THROW(mlap::fit_boundary_exponent(u, {0.2, 0.1}), mlap::InsufficientWindow);
    EXPECT_THROW(mlap::fit_log_correction(u, {1e-3, 1.5}), mlap::InsufficientWindow);
    GridFunction bad = u;
    for (double& v : bad.values) v = -v;
    EXPECT_THROW(mlap::fit_boundary_exponent(bad, mlap::default_fit_window(*g)), mlap::NonPositiveValues);
}

TEST(DefaultFitWindow, SpansAtMostFourDecades) {
    for (std::size_t n : {257, 2049, 8193}) {
        const auto g = mlap::make_graded_grid(n, 3.0);
        const auto w = mlap::default_fit_window(*g);
        EXPECT_DOUBLE_EQ(w.delta_min, 10.0 * g->min_width());
        EXPECT_LE(w.delta_max, 1e4 * w.delta_min * (1 + 1e-15));
        EXPECT_LE(w.delta_max, 0.5 / 8.0);
    }
}

TEST(SobolevSeminorm, Examples) {
    const auto g = mlap::make_graded_grid(1025, 1.0);
    const auto u = GridFunction::sample(g, [](double x, double) { return x * (1 - x); });
    EXPECT_NEAR(mlap::sobolev_seminorm(u, 2.0), std::sqrt(1.0 / 3.0), 1e-6);
    const auto lin = GridFunction::sample(g, [](double x, double) { return x <= 0.5 ? x : 1 - x; });
    for (double tau : {1.0, 2.0, 3.5}) EXPECT_NEAR(mlap::sobolev_seminorm(lin, tau), 1.0, 1e-12);
    EXPECT_EQ(mlap::sobolev_seminorm(GridFunction(g), 2.0), 0.0);
}

TEST(SobolevSeminorm, PowerMeanIsNondecreasingInTau) {
    std::mt19937_64 rng(12);
    const auto g = mlap::make_graded_grid(513, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto u = fields::random_smooth(g, rng);
        double previous = 0.0;
        for (double tau : {1.0, 1.5, 2.0, 3.0, 5.0, 8.0}) {
            const double value = mlap::sobolev_seminorm(u, tau);
            EXPECT_GE(value, previous * (1 - 1e-12));
            previous = value;
        }
    }
}

TEST(ClassifySequence, SyntheticSequences) {
    const std::vector<double> convergent{1.0, 1.5, 1.75, 1.875, 1.9375, 1.96875};
    EXPECT_EQ(mlap::classify_sequence(convergent, 2.0), Verdict::Convergent);
    const std::vector<double> geometric{1.0, 1.1, 1.21, 1.331};
    EXPECT_EQ(mlap::classify_sequence(geometric, 2.0), Verdict::Divergent);
    // ||Du||^tau grows by a constant per level: a logarithmic divergence.
    std::vector<double> log_growth;
    for (int k = 10; k < 14; ++k) log_growth.push_back(std::pow(static_cast<double>(k), 1.0 / 3.0));
    EXPECT_EQ(mlap::classify_sequence(log_growth, 3.0), Verdict::Divergent);
    const std::vector<double> slow{1.0, 1.05, 1.085, 1.1095};
    EXPECT_EQ(mlap::classify_sequence(slow, 1.0), Verdict::Marginal);
    const std::vector<double> zeros{0.0, 0.0, 0.0};
    EXPECT_EQ(mlap::classify_sequence(zeros, 2.0), Verdict::Convergent);
    const std::vector<double> short_seq{1.0, 2.0};
    EXPECT_THROW(mlap::classify_sequence(short_seq, 2.0), mlap::Error);
}

TEST(ThresholdScan, SmoothFieldConvergesForAllTau) {
    const auto scan = mlap::threshold_scan([](double, double) { return 2.0; }, 2.0, Domain::interval(), {2.0, 4.0, 8.0},
                                           {257, 513, 1025, 2049}, 2.0, std::numeric_limits<double>::infinity());
    ASSERT_EQ(scan.verdicts.size(), 3u);
    for (Verdict v : scan.verdicts) EXPECT_EQ(v, Verdict::Convergent);
    EXPECT_EQ(scan.norms.size(), 4u);
    EXPECT_NEAR(scan.norms.back()[0], std::sqrt(1.0 / 3.0), 1e-5);
}

TEST(ThresholdScan, PowerSingularityChangesVerdictAtThreshold) {
    // w = sin(pi x)^{2/3} has |Dw| ~ delta^{-1/3}: finite exactly for tau < 3.
    const auto scan = mlap::threshold_scan([](double x, double) { return oracle::cusp_theta(x); }, 2.0,
                                           Domain::interval(), {2.0, 2.5, 3.0, 3.5}, {1025, 2049, 4097, 8193}, 3.0,
                                           3.0);
    EXPECT_EQ(scan.verdicts[0], Verdict::Convergent);
    EXPECT_EQ(scan.verdicts[1], Verdict::Convergent);
    EXPECT_EQ(scan.verdicts[2], Verdict::Divergent);
    EXPECT_EQ(scan.verdicts[3], Verdict::Divergent);
}

TEST(ThresholdScan, SingularProblemMatchesPredictedThreshold) {
    mlap::ProblemSpec spec;
    spec.m = 2.0;
    spec.p = 0.5;
    spec.q = 1.0;
    const auto scan = mlap::threshold_scan(spec, {2.0, 2.5, 3.5, 4.0}, {1025, 2049, 4097, 8193}, 3.0);
    EXPECT_DOUBLE_EQ(scan.predicted_threshold, 3.0);
    EXPECT_EQ(scan.verdicts[0], Verdict::Convergent);
    EXPECT_EQ(scan.verdicts[1], Verdict::Convergent);
    EXPECT_EQ(scan.verdicts[2], Verdict::Divergent);
    EXPECT_EQ(scan.verdicts[3], Verdict::Divergent);
}

TEST(ThresholdScan, RejectsBadLevels) {
    auto theta = [](double, double) { return 1.0; };
    EXPECT_THROW(mlap::threshold_scan(theta, 2.0, Domain::interval(), {2.0}, {257, 513, 1025}, 2.0, 3.0), mlap::Error);
    EXPECT_THROW(mlap::threshold_scan(theta, 2.0, Domain::interval(), {2.0}, {257, 513, 513, 1025}, 2.0, 3.0),
                 mlap::Error);
    EXPECT_THROW(mlap::threshold_scan(theta, 2.0, Domain::interval(), {}, {257, 513, 1025, 2049}, 2.0, 3.0),
                 mlap::Error);
}

TEST(DistanceIntegral, FiniteBelowOneInfiniteAtAndAbove) {
    const std::vector<std::size_t> levels{1025, 2049, 4097, 8193};
    for (double a : {0.0, 0.5, 0.9}) {
        const auto r = mlap::distance_integral_classify(a, levels);
        EXPECT_TRUE(r.finite) << a;
        EXPECT_NEAR(r.value, oracle::distance_integral(a), 1e-6 * oracle::distance_integral(a)) << a;
    }
    for (double a : {1.0, 1.1, 1.5}) EXPECT_FALSE(mlap::distance_integral_classify(a, levels).finite) << a;
    EXPECT_THROW(mlap::distance_integral_classify(0.5, {1025, 2049, 4097}), mlap::Error);
}

TEST(GradientBound, HoldsForMatchingExponentOnly) {
    auto solve = [](std::size_t n) {
        const auto g = mlap::make_graded_grid(n, 3.0);
        return mlap::solve_dirichlet(of_delta(g, [](double d) { return std::pow(d, -4.0 / 3.0); }), 2.0).solution;
    };
    const auto coarse = solve(257);
    const auto fine = solve(4097);
    const auto right = mlap::gradient_bound_check(coarse, fine, 4.0 / 3.0, 2);
    EXPECT_TRUE(right.pass);
    EXPECT_GT(right.bound_constant, 0.0);
    EXPECT_FALSE(mlap::gradient_bound_check(coarse, fine, 1.1, 2).pass);
}

}  // namespace
