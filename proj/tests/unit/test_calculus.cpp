#include <gtest/gtest.h>

#include <cmath>

#include "graphvar/calculus.hpp"
#include "test_util.hpp"

namespace graphvar {
namespace {

using testing::path2;
using testing::random_function;
using testing::random_graph;
using testing::rel_err;

const VertexFunction kStep({0.0, 1.0});

/// Reference operators written directly from the defining sums, independent
/// of the kernels.
VertexFunction naive_laplacian(const WeightedGraph& g, const VertexFunction& u) {
    std::vector<double> out(g.size(), 0.0);
    for (std::size_t x = 0; x < g.size(); ++x) {
        for (std::size_t y = 0; y < g.size(); ++y) out[x] += g.weight(x, y) * (u[y] - u[x]);
        out[x] /= g.mu(x);
    }
    return VertexFunction(out);
}

VertexFunction naive_gamma(const WeightedGraph& g, const VertexFunction& u, const VertexFunction& v) {
    std::vector<double> out(g.size(), 0.0);
    for (std::size_t x = 0; x < g.size(); ++x) {
        for (std::size_t y = 0; y < g.size(); ++y) out[x] += g.weight(x, y) * (u[y] - u[x]) * (v[y] - v[x]);
        out[x] /= 2.0 * g.mu(x);
    }
    return VertexFunction(out);
}

double max_rel(const VertexFunction& a, const VertexFunction& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, rel_err(a[i], b[i]));
    return worst;
}

TEST(Calculus, PathOfTwoHandValues) {
    const auto g = path2();
    const auto gm = gamma(g, kStep, kStep);
    EXPECT_DOUBLE_EQ(gm[0], 1.0);
    EXPECT_DOUBLE_EQ(gm[1], 1.0);
    const auto gn = grad_norm(g, kStep);
    EXPECT_DOUBLE_EQ(gn[0], 1.0);
    EXPECT_DOUBLE_EQ(gn[1], 1.0);
    const auto lap = laplacian(g, kStep);
    EXPECT_DOUBLE_EQ(lap[0], 2.0);
    EXPECT_DOUBLE_EQ(lap[1], -2.0);
    const auto m2 = m_grad_norm(g, kStep, 2);
    EXPECT_DOUBLE_EQ(m2[0], 2.0);
    EXPECT_DOUBLE_EQ(m2[1], 2.0);
    const auto p3 = p_laplacian(g, kStep, 3.0);
    EXPECT_DOUBLE_EQ(p3[0], 2.0);
    EXPECT_DOUBLE_EQ(p3[1], -2.0);
    EXPECT_DOUBLE_EQ(poly_lap_weak(g, kStep, VertexFunction({1.0, 0.0}), 2, 2.0), -8.0);
    EXPECT_DOUBLE_EQ(lr_norm(g, kStep, 2.0), 1.0);
}

TEST(Calculus, ConstantsAreAnnihilated) {
    const auto g = grid3x3();
    const auto c = VertexFunction::constant(9, 3.5);
    CounterRng rng(1, 0);
    const auto v = random_function(rng, 9);
    EXPECT_EQ(gamma(g, c, v), VertexFunction::zeros(9));
    EXPECT_EQ(laplacian(g, c), VertexFunction::zeros(9));
    EXPECT_EQ(grad_norm(g, c), VertexFunction::zeros(9));
    for (int m = 1; m <= 4; ++m) EXPECT_EQ(m_grad_norm(g, c, m), VertexFunction::zeros(9));
    EXPECT_EQ(poly_lap_weak(g, v, c, 2, 3.0), 0.0);
    EXPECT_DOUBLE_EQ(lr_norm(g, VertexFunction::constant(9, -2.0), 1.0), 18.0);
}

TEST(Calculus, GammaIsSymmetric) {
    const auto g = grid3x3();
    CounterRng rng(2, 0);
    for (int i = 0; i < 20; ++i) {
        const auto u = random_function(rng, 9), v = random_function(rng, 9);
        EXPECT_EQ(gamma(g, u, v), gamma(g, v, u));
    }
}

TEST(Calculus, MatchesNaiveSums) {
    CounterRng rng(3, 0);
    for (int i = 0; i < 100; ++i) {
        const auto g = random_graph(rng);
        const auto u = random_function(rng, g.size()), v = random_function(rng, g.size());
        EXPECT_LT(max_rel(laplacian(g, u), naive_laplacian(g, u)), 1e-12);
        EXPECT_LT(max_rel(gamma(g, u, v), naive_gamma(g, u, v)), 1e-12);
        const auto gn = grad_norm(g, u);
        const auto gg = gamma(g, u, u);
        for (std::size_t x = 0; x < g.size(); ++x) EXPECT_NEAR(gn[x] * gn[x], gg[x], 1e-12 * (1 + gg[x]));
        EXPECT_EQ(m_grad_norm(g, u, 1), gn);
        EXPECT_LT(max_rel(iterated_laplacian(g, u, 2), laplacian(g, laplacian(g, u))), 1e-12);
        EXPECT_LT(max_rel(p_laplacian(g, u, 2.0), laplacian(g, u)), 1e-12);
    }
}

// Green's identity, divergence theorem, self-adjointness, the weak
// p-Laplacian identity and reconstruction of the pointwise poly-Laplacian,
// all on random graphs with at most 8 vertices.
TEST(Calculus, OracleIdentitiesOnRandomGraphs) {
    CounterRng rng(4, 0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto g = random_graph(rng);
        const std::size_t n = g.size();
        const auto u = random_function(rng, n), v = random_function(rng, n);
        const auto lu = laplacian(g, u);
        worst = std::max(worst, std::abs(integrate(g, lu)) / (1 + integrate(g, multiply(lu, lu))));
        worst = std::max(worst, rel_err(integrate(g, gamma(g, u, v)), -pairing(g, lu, v)));
        worst = std::max(worst, rel_err(pairing(g, lu, v), pairing(g, u, laplacian(g, v))));
        for (double p : {2.0, 2.5, 3.0, 4.0}) {
            const auto gn = grad_norm(g, u);
            const auto gm = gamma(g, u, v);
            double rhs = 0.0;
            for (std::size_t x = 0; x < n; ++x) rhs += g.mu(x) * std::pow(gn[x], p - 2.0) * gm[x];
            worst = std::max(worst, rel_err(pairing(g, p_laplacian(g, u, p), v), -rhs));
            worst = std::max(worst, rel_err(poly_lap_weak(g, u, v, 1, p), rhs));
        }
        for (int m = 1; m <= 4; ++m) {
            for (double p : {2.0, 2.5, 3.0, 4.0}) {
                const auto pw = poly_lap_pointwise(g, u, m, p);
                worst = std::max(worst, rel_err(pairing(g, pw, v), poly_lap_weak(g, u, v, m, p)));
            }
        }
    }
    EXPECT_LT(worst, 1e-10);
}

TEST(Calculus, FastPolyLaplacianMatchesPointwise) {
    CounterRng rng(5, 0);
    for (int i = 0; i < 60; ++i) {
        const auto g = random_graph(rng);
        const auto u = random_function(rng, g.size());
        for (int m = 1; m <= 5; ++m) {
            for (double p : {1.5, 2.0, 2.5, 3.0, 4.0}) {
                const auto a = poly_lap_apply(g, u, m, p);
                const auto b = poly_lap_pointwise(g, u, m, p);
                double scale = 1.0;
                for (double x : b.values()) scale = std::max(scale, std::abs(x));
                for (std::size_t x = 0; x < g.size(); ++x) EXPECT_NEAR(a[x], b[x], 1e-10 * scale) << m << " " << p;
            }
        }
    }
}

TEST(Calculus, LowOrderPolyLaplaciansReduce) {
    CounterRng rng(6, 0);
    for (int i = 0; i < 40; ++i) {
        const auto g = random_graph(rng);
        const auto u = random_function(rng, g.size());
        const auto lu = laplacian(g, u);
        EXPECT_LT(max_rel(poly_lap_apply(g, u, 1, 2.0), combine(-1.0, lu, 0.0, lu)), 1e-12);
        EXPECT_LT(max_rel(poly_lap_apply(g, u, 2, 2.0), laplacian(g, lu)), 1e-12);
        EXPECT_LT(max_rel(poly_lap_apply(g, u, 1, 3.0), combine(-1.0, p_laplacian(g, u, 3.0), 0.0, lu)), 1e-12);
    }
}

TEST(Calculus, QuadraticPolyLaplacianIsLinear) {
    CounterRng rng(7, 0);
    for (int i = 0; i < 40; ++i) {
        const auto g = random_graph(rng);
        const auto u = random_function(rng, g.size()), v = random_function(rng, g.size());
        const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
        for (int m = 1; m <= 4; ++m) {
            const auto lhs = poly_lap_apply(g, combine(a, u, b, v), m, 2.0);
            const auto rhs = combine(a, poly_lap_apply(g, u, m, 2.0), b, poly_lap_apply(g, v, m, 2.0));
            EXPECT_LT(max_rel(lhs, rhs), 1e-10);
        }
    }
}

TEST(Calculus, SingularPowersAreReportedOrRejected) {
    // Path a - b - c - d with u = (0, 0, 0, 1): the gradient vanishes at a and b.
    GraphDescription d;
    d.vertices = {{"a", 1.0}, {"b", 1.0}, {"c", 1.0}, {"d", 1.0}};
    d.edges = {{"a", "b", 1.0}, {"b", "c", 1.0}, {"c", "d", 1.0}};
    const auto g = build_graph(d);
    const VertexFunction u({0.0, 0.0, 0.0, 1.0});
    SingularityReport report;
    const auto out = poly_lap_apply(g, u, 1, 1.5, &report);
    EXPECT_TRUE(report.regularized);
    EXPECT_EQ(report.vertices, 2u);
    for (double x : out.vector()) EXPECT_TRUE(std::isfinite(x));
    try {
        poly_lap_apply(g, u, 1, 1.5, nullptr, SingularPolicy::Throw);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SingularExponent);
    }
    // With no gradient anywhere the operator is zero without regularising.
    SingularityReport flat;
    EXPECT_EQ(poly_lap_apply(g, VertexFunction::zeros(4), 1, 1.5, &flat), VertexFunction::zeros(4));
    EXPECT_FALSE(flat.regularized);
    SingularityReport clean;
    p_laplacian(g, u, 3.0, &clean);
    EXPECT_FALSE(clean.regularized);
}

TEST(Calculus, RejectsBadOrders) {
    const auto g = path2();
    for (auto [m, p] : {std::pair{0, 2.0}, std::pair{1, 1.0}, std::pair{2, 0.5}}) {
        try {
            poly_lap_apply(g, kStep, m, p);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::BadParam);
        }
    }
}

}  // namespace
}  // namespace graphvar
