#include <gtest/gtest.h>

#include <cmath>

#include "graphvar/nonlinearity.hpp"
#include "test_util.hpp"

namespace graphvar {
namespace {

const double kW1 = std::sqrt(15.0);
const double kW2 = std::cbrt(22.5);
const double kW = std::cbrt(4.0);

NonlinearityModel finite_model(double r1 = 2.0, double r2 = 3.0) { return example_6_1(kW1, kW2, r1, r2); }

TEST(FiniteExampleModel, HandValues) {
    const auto f = finite_model();
    for (double t : {-3.0, 0.0, 0.7, 2.0, 40.0}) EXPECT_DOUBLE_EQ(f.Fs(0, 0.0, t), kW1);
    EXPECT_DOUBLE_EQ(f.Ft(0, 1.0, 0.0), kW2);
    EXPECT_EQ(f.F(0, 0.0, 0.0), 0.0);
    EXPECT_NEAR(f.F(3, kW1, kW2), 0.5 * kW1 * kW1 + 0.5 * kW2 * kW2, 1e-12);
    EXPECT_NEAR(f.F(0, kW1, kW2), 7.5 + 0.5 * std::pow(22.5, 2.0 / 3.0), 1e-12);
}

TEST(FiniteExampleModel, InnerPieceMatchesClosedForm) {
    const auto f = finite_model();
    CounterRng rng(1, 0);
    for (int i = 0; i < 200; ++i) {
        const double s = rng.uniform(0, kW1), t = rng.uniform(0, kW2);
        const double expect = kW1 * s - 0.5 * s * s + kW2 * t - 0.5 * t * t;
        EXPECT_NEAR(f.F(0, s, t), expect, 1e-12 * (1 + std::abs(expect)));
    }
}

TEST(FiniteExampleModel, PrimitiveIsOddAndContinuousAcrossSeams) {
    const auto f = finite_model();
    for (double s : f.seams_s()) {
        const double e = 1e-9 * (1 + std::abs(s));
        EXPECT_NEAR(f.F(0, s - e, 0.3), f.F(0, s + e, 0.3), 1e-6 * (1 + std::abs(f.F(0, s, 0.3))));
        EXPECT_NEAR(f.Fs(0, s - e, 0.3), f.Fs(0, s + e, 0.3), 1e-5 * (1 + std::abs(f.Fs(0, s, 0.3))));
    }
    for (double t : f.seams_t()) {
        const double e = 1e-9 * (1 + std::abs(t));
        EXPECT_NEAR(f.F(0, 0.3, t - e), f.F(0, 0.3, t + e), 1e-6 * (1 + std::abs(f.F(0, 0.3, t))));
    }
    CounterRng rng(2, 0);
    for (int i = 0; i < 200; ++i) {
        const double s = rng.uniform(-30, 30), t = rng.uniform(-30, 30);
        EXPECT_NEAR(f.F(0, -s, -t), -f.F(0, s, t), 1e-9 * (1 + std::abs(f.F(0, s, t))));
    }
}

TEST(FiniteExampleModel, DerivativeConsistency) {
    const auto f = finite_model();
    const auto rep = derivative_consistency(f, 1000, 1e-5);
    EXPECT_TRUE(rep.passed);
    EXPECT_GE(rep.samples_checked, 1000u);
    EXPECT_LT(rep.max_discrepancy, 1e-4);
}

TEST(FiniteExampleModel, GrowthBoundHoldsWhereDeclared) {
    for (auto [r1, r2] : {std::pair{2.0, 3.0}, std::pair{1.5, 2.0}}) {
        const auto f = finite_model(r1, r2);
        ASSERT_TRUE(f.growth().has_value());
        const auto& gb = *f.growth();
        CounterRng rng(3, 0);
        for (int i = 0; i < 5000; ++i) {
            const double s = rng.uniform(-80, 80), t = rng.uniform(-80, 80);
            const double bound = gb.f1.at(0) * std::pow(std::abs(s), gb.alpha) +
                                 gb.f2.at(0) * std::pow(std::abs(t), gb.beta) + gb.g.at(0);
            EXPECT_LE(f.F(0, s, t), bound * (1 + 1e-12)) << s << " " << t;
        }
    }
}

TEST(FiniteExampleModel, DisplayedTableAgreesInFirstQuadrantOnly) {
    const auto check = cross_check_example_6_1(kW1, kW2, 2.0, 3.0);
    EXPECT_TRUE(check.matches_first_quadrant()) << check.max_mismatch_first_quadrant;
    // The table is written in |s|, |t|, so it is even while the integrated
    // primitive is odd; the two disagree off the first quadrant.
    EXPECT_GT(check.max_mismatch_other_quadrants, 1e-3);
}

TEST(FiniteExampleModel, RejectsOutOfRangeParameters) {
    for (auto [r1, r2] : {std::pair{1.0, 2.0}, std::pair{2.5, 2.0}, std::pair{2.0, 3.5}}) {
        try {
            finite_model(r1, r2);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::BadParam);
        }
    }
}

TEST(SupportedExampleModel, HandValues) {
    const auto g = lattice_ball(6);
    const std::size_t x0 = g.index("0,0");
    const auto f = example_6_2(g, x0, kW, 5.0);
    EXPECT_NEAR(f.F(x0, kW, 0.0), 0.5 * kW * kW, 1e-12);
    const double mid = 0.5 * kW * kW + std::pow(6 * kW, 6) / 6.0 - 6 * std::pow(kW, 6) + 5.0 / 6.0 * std::pow(kW, 6);
    EXPECT_NEAR(f.F(x0, 6 * kW, 0.0), mid, 1e-9 * mid);
    EXPECT_NEAR(f.F(x0, 6 * kW, 0.0), 124334.6, 0.1);
    EXPECT_NEAR(f.F(x0, 6 * kW, 0.0), example_6_2_displayed_F(kW, 5.0, 6 * kW), 1e-9 * mid);
    for (std::size_t x = 0; x < g.size(); ++x) {
        if (x == x0) continue;
        EXPECT_EQ(f.F(x, 3.0, 0.0), 0.0);
        EXPECT_EQ(f.Fs(x, 3.0, 0.0), 0.0);
    }
    EXPECT_TRUE(f.traits().t_independent);
}

TEST(SupportedExampleModel, MatchesDisplayedPrimitive) {
    const auto g = lattice_ball(2);
    const auto f = example_6_2(g, g.index("0,0"), kW, 4.0);
    CounterRng rng(4, 0);
    for (int i = 0; i < 500; ++i) {
        const double s = rng.uniform(0, 10);
        const double d = example_6_2_displayed_F(kW, 4.0, s);
        EXPECT_NEAR(f.F(g.index("0,0"), s, 0.0), d, 1e-9 * (1 + std::abs(d)));
    }
}

TEST(SupportedExampleModel, SmoothBranchDerivatives) {
    const auto g = lattice_ball(1);
    const auto f = example_6_2(g, g.index("0,0"), kW, 5.0);
    DerivativeCheckOptions opt;
    opt.abs_s_range = std::pair{kW, 6 * kW};
    const auto rep = derivative_consistency(f, 500, 1e-6, opt);
    EXPECT_TRUE(rep.passed);
    EXPECT_LT(rep.max_discrepancy, 1e-6);
}

TEST(SupportedExampleModel, EnvelopeBoundsPrimitiveButNotDerivative) {
    const auto g = lattice_ball(1);
    const std::size_t x0 = g.index("0,0");
    const auto f = example_6_2(g, x0, kW, 5.0);
    ASSERT_TRUE(f.envelope().has_value());
    const auto& env = *f.envelope();
    double worst_f = 0.0, worst_fs = 0.0;
    for (int i = 0; i <= 4000; ++i) {
        const double s = 12.0 * i / 4000.0;
        const double bound = env.a(s) * env.b.at(x0);
        worst_f = std::max(worst_f, std::abs(f.F(x0, s, 0.0)) - bound);
        worst_fs = std::max(worst_fs, std::abs(f.Fs(x0, s, 0.0)) - bound);
    }
    EXPECT_LE(worst_f, 0.0);
    EXPECT_GT(worst_fs, 1.0);
}

TEST(DerivativeConsistency, DetectsWrongPartial) {
    NonlinearityModel bad("bad", [](std::size_t, double s, double) { return s; },
                          [](std::size_t, double, double) { return 0.0; },
                          [](std::size_t, double, double) { return 0.0; }, {});
    try {
        derivative_consistency(bad, 100, 1e-5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InconsistentDerivative);
    }
    DerivativeCheckOptions opt;
    opt.report_only = true;
    const auto rep = derivative_consistency(bad, 100, 1e-5, opt);
    EXPECT_FALSE(rep.passed);
    EXPECT_NEAR(rep.max_discrepancy, 1.0, 1e-6);
}

TEST(Tabulated, InterpolatesAndDifferentiates) {
    TabulatedNonlinearity table;
    table.s = {-2, -1, 0, 1, 2};
    table.t = {-1, 0, 1};
    table.F.assign(5, std::vector<double>(3));
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 3; ++j) table.F[i][j] = 2.0 * table.s[i] - table.t[j] + 0.5 * table.s[i] * table.t[j];
    }
    const auto f = tabulated(table);
    // Bilinear data is reproduced exactly, inside and beyond the grid.
    for (auto [s, t] : {std::pair{0.3, 0.4}, std::pair{-1.7, -0.2}, std::pair{3.0, 2.0}}) {
        EXPECT_NEAR(f.F(0, s, t), 2 * s - t + 0.5 * s * t, 1e-12);
        EXPECT_NEAR(f.Fs(0, s, t), 2 + 0.5 * t, 1e-12);
        EXPECT_NEAR(f.Ft(0, s, t), -1 + 0.5 * s, 1e-12);
    }
    table.F.pop_back();
    try {
        tabulated(table);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BadParam);
    }
}

}  // namespace
}  // namespace graphvar
