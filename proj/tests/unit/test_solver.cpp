#include <gtest/gtest.h>

#include <cmath>

#include "graphvar/fixtures.hpp"
#include "graphvar/io.hpp"
#include "graphvar/solver.hpp"
#include "test_util.hpp"

namespace graphvar {
namespace {

using testing::make_problem;
using testing::path2;

/// P2 with h1 = (1, 2), p = q = 2, m = 1, F = s: the critical point solves
/// [[2 + 1, -2], [-2, 2 + 2]] u = lambda (1, 1), v = 0.
ProblemSpec linear_problem() {
    auto prob = make_problem(path2(), testing::linear_model(1.0, 0.0), 1, 1, 2.0, 2.0, 1.0, 1.0);
    prob.h1 = VertexFunction({1.0, 2.0});
    return prob;
}

VertexFunction linear_solution(double lambda) {
    const double a = 3.0, b = -2.0, c = -2.0, d = 4.0;
    const double det = a * d - b * c;
    return VertexFunction({lambda * (d - b) / det, lambda * (a - c) / det});
}

SolverConfig quick(std::uint64_t seed = 42) {
    SolverConfig cfg;
    cfg.seed = seed;
    return cfg;
}

TEST(Solver, LinearOracle) {
    const auto prob = linear_problem();
    const double lambda = 0.7;
    const auto exact = linear_solution(lambda);
    const StatePair at_exact{exact, VertexFunction::zeros(2)};
    EXPECT_LT(residual(prob, lambda, at_exact), 1e-12);
    const StatePair start{VertexFunction({3.0, -1.0}), VertexFunction({0.5, 2.0})};
    const auto cp = minimize(prob, lambda, start, quick());
    ASSERT_TRUE(cp.converged());
    EXPECT_LE(cp.residual_sup, 1e-8);
    EXPECT_LT(sup_norm(combine(1.0, cp.state.u, -1.0, exact)), 1e-10);
    EXPECT_LT(sup_norm(cp.state.v), 1e-10);
    EXPECT_EQ(cp.kind, PointKind::Minimizer);
}

TEST(Solver, LinearOracleOnRandomGraphsAgreesWithDirectSolve) {
    CounterRng rng(31, 0);
    for (int i = 0; i < 10; ++i) {
        auto prob = make_problem(testing::random_graph(rng), testing::linear_model(1.0, 0.5), 1, 1, 2.0, 2.0, 1.0,
                                 1.0);
        const std::size_t n = prob.g().size();
        prob.h1 = testing::random_function(rng, n, 0.5, 2.0);
        prob.h2 = testing::random_function(rng, n, 0.5, 2.0);
        const auto cp = minimize(prob, 1.3, zero_state(prob), quick());
        ASSERT_TRUE(cp.converged());
        // The equations are linear: (-Delta + h1) u = 1.3, (-Delta + h2) v = 0.65.
        const auto gu = combine(-1.0, laplacian(prob.g(), cp.state.u), 1.0, multiply(prob.h1, cp.state.u));
        const auto gv = combine(-1.0, laplacian(prob.g(), cp.state.v), 1.0, multiply(prob.h2, cp.state.v));
        for (std::size_t x = 0; x < n; ++x) {
            EXPECT_NEAR(gu[x], 1.3, 1e-8);
            EXPECT_NEAR(gv[x], 0.65, 1e-8);
        }
    }
}

TEST(Solver, ZeroIsNotCriticalForFiniteExample) {
    const auto pf = fixtures::example_6_1();
    EXPECT_NEAR(residual(pf.problem, 0.3, zero_state(pf.problem)), 0.3 * std::sqrt(15.0), 1e-12);
}

TEST(Solver, DescentFromDeltaStateOnCoerciveExample) {
    const auto pf = fixtures::example_6_2(5.0, 3);
    const auto& prob = pf.problem;
    const StatePair start{VertexFunction::indicator(prob.g().size(), prob.g().index("0,0"), 6.0 * std::cbrt(4.0)), {}};
    const auto cp = minimize(prob, 1.0, start, quick());
    ASSERT_TRUE(cp.converged());
    EXPECT_LT(cp.action_value, action(prob, 1.0, start));
    EXPECT_LE(residual(prob, 1.0, cp.state), 1e-8);
    for (std::size_t x : prob.boundary) EXPECT_EQ(cp.state.u[x], 0.0);
    EXPECT_GT(sup_norm(cp.state.u), 1.0);
}

TEST(Solver, DescentFromDeltaPairRunsAwayWhereActionIsUnbounded) {
    // The s-growth of the finite-graph example is quadratic, so at lambda = 0.3
    // the action is unbounded below along positive constants in u and descent
    // from the delta pair leaves every bounded set.
    const auto pf = fixtures::example_6_1();
    const auto& prob = pf.problem;
    const StatePair start{VertexFunction::constant(9, 4.0 * std::sqrt(15.0)),
                          VertexFunction::constant(9, 5.0 * std::cbrt(22.5))};
    const auto cp = minimize(prob, 0.3, start, quick());
    EXPECT_EQ(cp.status, SolveStatus::NoConvergence);
    EXPECT_LT(cp.action_value, action(prob, 0.3, start));
    EXPECT_GT(sup_norm(cp.state.u), 1e7);
}

TEST(Solver, TinyLambdaConvergesNearZero) {
    const auto pf = fixtures::example_6_1();
    const auto cp = minimize(pf.problem, 1e-9, zero_state(pf.problem), quick());
    ASSERT_TRUE(cp.converged());
    EXPECT_LT(sup_norm(cp.state.u), 1e-8);
    EXPECT_LT(sup_norm(cp.state.v), 1e-8);
}

TEST(Solver, DeflationWithoutKnownPointsMatchesMinimize) {
    const auto prob = linear_problem();
    const StatePair start{VertexFunction({1.0, 1.0}), VertexFunction({-1.0, 0.0})};
    const auto a = minimize(prob, 0.7, start, quick());
    const auto b = deflated_solve(prob, 0.7, {}, start, quick());
    ASSERT_TRUE(a.converged());
    ASSERT_TRUE(b.converged());
    EXPECT_LT(w_distance(prob, a.state, b.state), 1e-9);
}

TEST(Solver, DeflationFindsSecondPoint) {
    const auto pf = fixtures::example_6_1();
    const auto& prob = pf.problem;
    auto cfg = fixtures::solver_defaults(pf);
    cfg.seed = 42;
    const auto set = find_three(prob, 0.3, cfg);
    ASSERT_FALSE(set.points.empty());
    const auto& first = set.points.front();
    const StatePair start{combine(1.0, first.state.u, 0.0, first.state.u),
                          combine(0.5, first.state.v, 0.0, first.state.v)};
    const auto cp = deflated_solve(prob, 0.3, {first.state}, start, cfg);
    ASSERT_TRUE(cp.converged());
    EXPECT_GT(w_distance(prob, cp.state, first.state), cfg.distinct_tol);
    EXPECT_LE(cp.residual_sup, cfg.grad_tol);
}

TEST(Solver, DeflationFromKnownPointIsRejected) {
    const auto pf = fixtures::example_6_1();
    const auto& prob = pf.problem;
    const auto cp0 = minimize(prob, 0.3, zero_state(prob), quick());
    ASSERT_TRUE(cp0.converged());
    const auto cp = deflated_solve(prob, 0.3, {cp0.state}, cp0.state, quick());
    EXPECT_FALSE(cp.converged());
}

TEST(Solver, FindThreeOnFiniteExample) {
    const auto pf = fixtures::example_6_1();
    auto cfg = fixtures::solver_defaults(pf);
    cfg.seed = 42;
    for (double lambda : {0.15, 0.3, 0.5}) {
        const auto set = find_three(pf.problem, lambda, cfg);
        ASSERT_TRUE(set.found_three()) << lambda;
        EXPECT_TRUE(set.zero_excluded);
        for (std::size_t i = 0; i < set.points.size(); ++i) {
            const auto& p = set.points[i];
            EXPECT_TRUE(p.converged());
            EXPECT_LT(p.residual_sup, 1e-8);
            EXPECT_NEAR(p.residual_sup, residual(pf.problem, lambda, p.state), 1e-15);
            EXPECT_TRUE(set.nontrivial_flags[i]);
            if (i > 0) {
                EXPECT_LE(set.points[i - 1].action_value, p.action_value);
            }
            for (std::size_t j = 0; j < i; ++j) {
                EXPECT_GT(set.pairwise_distances[i][j], cfg.distinct_tol);
                EXPECT_DOUBLE_EQ(set.pairwise_distances[i][j], w_distance(pf.problem, p.state, set.points[j].state));
            }
        }
        // At least one point is not a minimiser of the action.
        bool saddle = false;
        for (const auto& p : set.points) saddle = saddle || p.kind == PointKind::Saddle;
        EXPECT_TRUE(saddle) << lambda;
    }
}

TEST(Solver, FindThreeIsIndependentOfThreadCount) {
    const auto pf = fixtures::example_6_1();
    auto cfg = fixtures::solver_defaults(pf);
    cfg.seed = 7;
    cfg.starts = 24;
    cfg.threads = 1;
    const auto serial = io::dump(io::solution_to_json(pf.problem.g(), find_three(pf.problem, 0.3, cfg)));
    cfg.threads = 4;
    const auto parallel = io::dump(io::solution_to_json(pf.problem.g(), find_three(pf.problem, 0.3, cfg)));
    const auto again = io::dump(io::solution_to_json(pf.problem.g(), find_three(pf.problem, 0.3, cfg)));
    EXPECT_EQ(serial, parallel);
    EXPECT_EQ(parallel, again);
}

TEST(Solver, TinyLambdaFindsFewerThanThree) {
    const auto pf = fixtures::example_6_1();
    auto cfg = fixtures::solver_defaults(pf);
    cfg.seed = 42;
    cfg.starts = 16;
    cfg.deflation_attempts = 16;
    const auto set = find_three(pf.problem, 1e-9, cfg);
    EXPECT_FALSE(set.found_three());
    EXPECT_GE(set.points.size(), 1u);
}

TEST(Solver, MinimumEigenvalueSigns) {
    const auto prob = linear_problem();
    EXPECT_GT(hessian_min_eigenvalue(prob, 0.7, zero_state(prob)), 0.5);
}

TEST(Solver, RejectsBadConfigurationAndExponents) {
    SolverConfig cfg;
    cfg.grad_tol = 0.0;
    EXPECT_THROW(cfg.validate(), Error);
    cfg = SolverConfig{};
    cfg.starts = 0;
    EXPECT_THROW(cfg.validate(), Error);
    auto prob = make_problem(path2(), testing::linear_model(1, 0), 1, 1, 1.5, 2.0, 1.0, 1.0);
    try {
        require_solvable(prob);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BadParam);
    }
    EXPECT_EQ(point_kind_from_string(to_string(PointKind::Saddle)), PointKind::Saddle);
}

}  // namespace
}  // namespace graphvar
