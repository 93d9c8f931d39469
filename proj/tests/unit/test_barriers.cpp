#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mlap/barriers.hpp"
#include "mlap/errors.hpp"
#include "mlap/problem.hpp"
#include "mlap/solver.hpp"

namespace {

using mlap::BarrierSide;
using mlap::Domain;
using mlap::GridFunction;
using mlap::ProblemSpec;

ProblemSpec make(double m, double p, double q, Domain d = Domain::interval()) {
    ProblemSpec s;
    s.m = m;
    s.p = p;
    s.q = q;
    s.domain = d;
    return s;
}

const ProblemSpec kE1 = make(2, 0.3, 0.3);
const ProblemSpec kE2 = make(2, 0.5, 0.5);
const ProblemSpec kE3 = make(2, 0.5, 1.0);

mlap::BarrierRhs singular_rhs(const ProblemSpec& spec, const mlap::GridPtr& g) {
    return mlap::SingularRhs{mlap::sample_k(spec, g), spec.p};
}

TEST(BarrierProfile, FamiliesEvaluatePointwise) {
    const auto g = mlap::make_graded_grid(17, 1.0);
    const auto phi = GridFunction::sample(g, [](double x, double) { return x <= 0.5 ? x : 1.0 - x; });
    const auto identity = mlap::barrier_profile(mlap::PowerOfEigen{1.0}, phi);
    const auto power = mlap::barrier_profile(mlap::PowerOfEigen{2.0 / 3.0}, phi);
    const auto log = mlap::barrier_profile(mlap::LogPowerOfEigen{1.0 / 3.0, 2.0}, phi);
    const auto corrected = mlap::barrier_profile(mlap::CorrectedEigen{0.5, 0.25}, phi);
    for (std::size_t i = 1; i + 1 < g->size(); ++i) {
        const double v = phi[i];
        EXPECT_DOUBLE_EQ(identity[i], v);
        EXPECT_DOUBLE_EQ(power[i], std::pow(v, 2.0 / 3.0));
        EXPECT_DOUBLE_EQ(log[i], v * std::cbrt(std::log(2.0 / v)));
        EXPECT_DOUBLE_EQ(corrected[i], v - 0.25 * std::pow(v, 1.5));
    }
    EXPECT_DOUBLE_EQ(log[8], 0.5 * std::cbrt(std::log(4.0)));
    EXPECT_TRUE(log.has_dirichlet_zeros());
}

TEST(BarrierProfile, LogFamilyNeedsALargerThanMaxPhi) {
    const auto g = mlap::make_graded_grid(17, 1.0);
    const auto phi = GridFunction::sample(g, [](double x, double) { return std::sin(std::numbers::pi * x); });
    EXPECT_THROW(mlap::barrier_profile(mlap::LogPowerOfEigen{0.5, 1.0}, phi), mlap::DomainError);
    EXPECT_THROW(mlap::barrier_profile(mlap::LogPowerOfEigen{0.5, 0.9}, phi), mlap::DomainError);
    EXPECT_NO_THROW(mlap::barrier_profile(mlap::LogPowerOfEigen{0.5, 1.01}, phi));
}

TEST(BuildBarrier, ScalesBySide) {
    const auto g = mlap::make_graded_grid(129, 2.0);
    const auto base = mlap::first_eigenpair(g, 2.0);
    const mlap::BarrierFamily family = mlap::PowerOfEigen{2.0 / 3.0};
    const auto profile = mlap::barrier_profile(family, base.eigenfunction);
    const auto sub = mlap::build_barrier({family, 4.0, BarrierSide::Sub, base}, g);
    const auto super = mlap::build_barrier({family, 4.0, BarrierSide::Super, base}, g);
    for (std::size_t i = 0; i < g->size(); ++i) {
        EXPECT_DOUBLE_EQ(sub[i], profile[i] / 4.0);
        EXPECT_DOUBLE_EQ(super[i], profile[i] * 4.0);
    }
}

TEST(CheckBarrier, ZeroIsASubsolutionForPositiveForcing) {
    const auto g = mlap::make_graded_grid(129, 2.0);
    const auto theta = GridFunction::sample(g, [](double, double) { return 1.0; });
    const auto cert = mlap::check_barrier(GridFunction(g), BarrierSide::Sub, mlap::FixedRhs{theta}, 2.0);
    EXPECT_TRUE(cert.certified);
    EXPECT_FALSE(mlap::check_barrier(GridFunction(g), BarrierSide::Super, mlap::FixedRhs{theta}, 2.0).certified);
    EXPECT_EQ(cert.nodes_checked, g->size() - 2 - 2 * (mlap::kBarrierSkipCells + 1) + 2);
}

TEST(CheckBarrier, SingularRightHandSideNeedsPositiveCandidate) {
    const auto g = mlap::make_graded_grid(129, 2.0);
    EXPECT_THROW(mlap::check_barrier(GridFunction(g), BarrierSide::Sub, singular_rhs(kE3, g), 2.0),
                 mlap::NonPositiveCandidate);
    EXPECT_THROW(mlap::check_barrier(GridFunction(mlap::make_graded_grid(65, 2.0)), BarrierSide::Sub,
                                     singular_rhs(kE3, g), 2.0),
                 mlap::GridMismatch);
}

TEST(CheckBarrier, ExactSolutionIsBothSubAndSuper) {
    // theta = delta^{-4/3}: the solution itself sits on both sides up to the slack.
    const auto g = mlap::make_graded_grid(2049, 3.0);
    const auto theta = GridFunction::sample(g, [](double, double d) { return std::pow(d, -4.0 / 3.0); });
    const auto w = mlap::solve_dirichlet(theta, 2.0).solution;
    const mlap::FixedRhs rhs{theta};
    EXPECT_TRUE(mlap::check_barrier(w, BarrierSide::Sub, rhs, 2.0, 1e-6).certified);
    EXPECT_TRUE(mlap::check_barrier(w, BarrierSide::Super, rhs, 2.0, 1e-6).certified);
}

TEST(AutoScale, PowerBarrierForDistanceForcing) {
    // -w'' = delta^{-4/3} behaves like delta^{2/3}.
    const auto g = mlap::make_graded_grid(2049, 3.0);
    const auto base = mlap::first_eigenpair(g, 2.0);
    const auto theta = GridFunction::sample(g, [](double, double d) { return std::pow(d, -4.0 / 3.0); });
    const mlap::FixedRhs rhs{theta};
    const auto sub = mlap::auto_scale(mlap::PowerOfEigen{2.0 / 3.0}, BarrierSide::Sub, rhs, base, 1024.0);
    const auto super = mlap::auto_scale(mlap::PowerOfEigen{2.0 / 3.0}, BarrierSide::Super, rhs, base, 1024.0);
    EXPECT_LE(sub.c, 1024.0);
    EXPECT_LE(super.c, 1024.0);
    EXPECT_TRUE(sub.certificate.certified);
    EXPECT_LE(sub.certificate.worst_margin, 1e-6);
    EXPECT_GE(super.certificate.worst_margin, -1e-6);

    const auto w = mlap::solve_dirichlet(theta, 2.0).solution;
    const auto profile = mlap::barrier_profile(mlap::PowerOfEigen{2.0 / 3.0}, base.eigenfunction);
    for (std::size_t i = 1; i + 1 < g->size(); ++i) {
        EXPECT_LE(profile[i] / sub.c, w[i] * (1 + 1e-9));
        EXPECT_GE(profile[i] * super.c, w[i] * (1 - 1e-9));
    }
}

TEST(AutoScale, ThrowsWhenLadderIsExhausted) {
    const auto g = mlap::make_graded_grid(1025, 3.0);
    const auto base = mlap::first_eigenpair(g, 2.0);
    EXPECT_THROW(mlap::auto_scale(mlap::PowerOfEigen{0.3}, BarrierSide::Sub, singular_rhs(kE3, g), base, 4.0),
                 mlap::NoCertifiableScale);
}

TEST(AutoScale, CertificationIsMonotoneInC) {
    const auto g = mlap::make_graded_grid(1025, 3.0);
    const auto base = mlap::first_eigenpair(g, 2.0);
    for (const ProblemSpec& spec : {kE1, kE2, kE3}) {
        const auto family = mlap::regime_barrier_family(spec);
        const auto rhs = singular_rhs(spec, g);
        for (BarrierSide side : {BarrierSide::Sub, BarrierSide::Super}) {
            bool seen = false;
            for (double c = 2.0; c <= 4096.0; c *= 2.0) {
                const auto v = mlap::build_barrier({family, c, side, base}, g);
                const bool ok = mlap::check_barrier(v, side, rhs, 2.0).certified;
                if (seen) {
                    EXPECT_TRUE(ok) << mlap::describe(family) << " c=" << c;
                }
                seen = seen || ok;
            }
            EXPECT_TRUE(seen);
        }
    }
}

TEST(RegimeBarrierFamily, MatchesRegime) {
    const auto e1 = mlap::regime_barrier_family(kE1);
    ASSERT_TRUE(std::holds_alternative<mlap::CorrectedEigen>(e1));
    EXPECT_NEAR(std::get<mlap::CorrectedEigen>(e1).nu, 0.4, 1e-15);

    const auto e2 = mlap::regime_barrier_family(kE2);
    ASSERT_TRUE(std::holds_alternative<mlap::LogPowerOfEigen>(e2));
    EXPECT_NEAR(std::get<mlap::LogPowerOfEigen>(e2).s, 2.0 / 3.0, 1e-15);
    EXPECT_DOUBLE_EQ(std::get<mlap::LogPowerOfEigen>(e2).a, 2.0);

    const auto e3 = mlap::regime_barrier_family(kE3);
    ASSERT_TRUE(std::holds_alternative<mlap::PowerOfEigen>(e3));
    EXPECT_NEAR(std::get<mlap::PowerOfEigen>(e3).gamma, 2.0 / 3.0, 1e-15);

    // s = 1 / (m + p - 1) = 1.25 exceeds log 2, so A moves to exp(s + 1).
    const auto bumped = mlap::regime_barrier_family(make(1.5, 0.3, 0.7));
    ASSERT_TRUE(std::holds_alternative<mlap::LogPowerOfEigen>(bumped));
    EXPECT_NEAR(std::get<mlap::LogPowerOfEigen>(bumped).a, std::exp(2.25), 1e-12);
}

TEST(RegimeBarrierFamily, ExponentAgreesWithClassification) {
    for (double m : {1.5, 2.0, 3.0}) {
        for (double p : {0.2, 0.5, 0.9}) {
            // Midway between p + q = 1 and the admissibility bound.
            const double q = 1.0 - p + 0.5 * (1.0 - (1.0 - p) / m);
            const ProblemSpec spec = make(m, p, q);
            const auto family = mlap::regime_barrier_family(spec);
            ASSERT_TRUE(std::holds_alternative<mlap::PowerOfEigen>(family));
            EXPECT_DOUBLE_EQ(std::get<mlap::PowerOfEigen>(family).gamma,
                             mlap::classify_regime(spec).boundary_exponent);
        }
    }
}

TEST(Describe, NamesTheProfile) {
    EXPECT_EQ(mlap::describe(mlap::PowerOfEigen{0.5}), "phi^0.5");
    EXPECT_EQ(mlap::describe(mlap::LogPowerOfEigen{0.5, 2.0}), "phi*log^0.5(2/phi)");
    EXPECT_EQ(mlap::describe(mlap::CorrectedEigen{0.5, 0.25}), "phi-0.25*phi^1.5");
}

class RegimePairs : public ::testing::TestWithParam<ProblemSpec> {};

TEST_P(RegimePairs, PairIsOrderedAndSandwichesTheSolution) {
    const ProblemSpec spec = GetParam();
    const auto g = mlap::make_graded_grid(2049, 3.0, spec.domain);
    const auto base = mlap::first_eigenpair(g, spec.m);
    const auto pair = mlap::certify_pair(mlap::regime_barrier_family(spec), singular_rhs(spec, g), base);
    EXPECT_LE(pair.c, 1048576.0);
    EXPECT_DOUBLE_EQ(pair.c, std::max(pair.c_sub, pair.c_super));
    EXPECT_TRUE(pair.sub_certificate.certified);
    EXPECT_TRUE(pair.super_certificate.certified);
    const auto u = mlap::solve_singular(spec, g).solution;
    for (std::size_t i = g->first_free(); i <= g->last_free(); ++i) {
        EXPECT_LE(pair.sub[i], pair.super[i]);
        EXPECT_LE(pair.sub[i], u[i] + 1e-10);
        EXPECT_GE(pair.super[i], u[i] - 1e-10);
    }
}

INSTANTIATE_TEST_SUITE_P(Regimes, RegimePairs,
                         ::testing::Values(kE1, kE2, kE3, make(3, 0.5, 1.2), make(1.5, 0.2, 0.4),
                                           make(2, 0.5, 1.0, Domain::ball(2))));

TEST(ScaleUnderRefinement, WrongExponentGrowsCorrectOneStaysBounded) {
    const std::vector<std::size_t> levels{257, 1025, 4097};
    const auto wrong = mlap::study_scale_under_refinement(kE3, mlap::PowerOfEigen{0.3}, BarrierSide::Sub, levels, 3.0);
    EXPECT_FALSE(wrong.bounded);
    ASSERT_EQ(wrong.scales.size(), 3u);
    ASSERT_TRUE(wrong.scales[0] && wrong.scales[2]);
    EXPECT_GE(*wrong.scales[2], 8.0 * *wrong.scales[0]);

    const auto right =
        mlap::study_scale_under_refinement(kE3, mlap::PowerOfEigen{2.0 / 3.0}, BarrierSide::Sub, levels, 3.0);
    EXPECT_TRUE(right.bounded);
    for (const auto& c : right.scales) {
        ASSERT_TRUE(c);
        EXPECT_LE(*c, 8.0);
    }
}

}  // namespace
