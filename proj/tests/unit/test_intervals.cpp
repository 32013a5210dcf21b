#include <gtest/gtest.h>

#include <cmath>

#include "graphvar/fixtures.hpp"
#include "graphvar/intervals.hpp"
#include "test_util.hpp"

namespace graphvar {
namespace {

using testing::make_problem;
using testing::path2;

const double kGamma1 = std::sqrt(40.5);
const double kGamma2 = 3.0;
const double kDelta1 = 4.0 * std::sqrt(15.0);
const double kDelta2 = 5.0 * std::cbrt(22.5);
const SystemConstants kFinite{kGamma1, kGamma2, kDelta1, kDelta2};

const double kGamma = std::cbrt(16.0 / 3.0);
const double kDelta = 6.0 * std::cbrt(4.0);

NonlinearityModel zero_model() {
    NonlinearityModel::Traits traits;
    traits.corner_maximal = true;
    auto z = [](std::size_t, double, double) { return 0.0; };
    NonlinearityModel m("zero", z, z, z, traits);
    m.set_growth({0.0, 0.0, 0.0, 0.0, 0.0});
    return m;
}

IntervalReport supported_report(double gamma = kGamma, double delta = kDelta) {
    const auto pf = fixtures::example_6_2();
    const auto& prob = pf.problem;
    return interval_scalar(prob, gamma, delta, GraphMode::LocallyFinite, LocalFloors{prob.g().index("0,0"), 4.0, 1.0});
}

TEST(Kappa, FiniteExampleScales) {
    const auto pf = fixtures::example_6_1();
    const auto k = kappa_finite(pf.problem);
    ASSERT_EQ(k.size(), 2u);
    EXPECT_NEAR(k[0], 1.0 / std::sqrt(40.5), 1e-15);
    EXPECT_NEAR(k[1], 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(kGamma1 * k[0], 1.0, 1e-12);
    EXPECT_NEAR(kGamma2 * k[1], 1.0, 1e-12);
}

TEST(Kappa, SmallGraphs) {
    auto prob = make_problem(path2(), testing::linear_model(1, 1), 1, 1, 2.0, 2.0, 1.0, 1.0);
    EXPECT_NEAR(kappa_finite(prob)[0], 1.0, 1e-15);
    GraphDescription single;
    single.vertices = {{"o", 1.0}};
    for (double p : {1.5, 2.0, 3.0}) {
        auto one = make_problem(build_graph(single), testing::linear_model(1, 0), 1, 1, p, 2.0, p, 1.0, true);
        EXPECT_NEAR(kappa_finite(one)[0], 1.0, 1e-15);
    }
}

TEST(LocalMass, HandValues) {
    const auto lat = lattice_ball(6);
    const auto M = local_mass(lat, lat.index("0,0"), 3.0, 3.0, VertexFunction::constant(lat.size(), 4.0), {});
    EXPECT_NEAR(M.M1, 16.0, 1e-12);
    EXPECT_FALSE(M.M2.has_value());

    const auto g = path2();
    const auto P = local_mass(g, 0, 2.0, 3.0, VertexFunction::constant(2, 1.0), VertexFunction::constant(2, 1.0));
    EXPECT_NEAR(P.M1, 3.0, 1e-15);
    ASSERT_TRUE(P.M2.has_value());
    EXPECT_NEAR(*P.M2, 3.0, 1e-15);

    GraphDescription d;
    d.vertices = {{"a", 1.0}, {"b", 1.0}, {"c", 1.0}};
    d.edges = {{"a", "b", 1.0}};
    const auto iso = build_graph(d);
    EXPECT_DOUBLE_EQ(local_mass(iso, 2, 2.0, 2.0, VertexFunction::constant(3, 2.5), {}).M1, 2.5);
}

TEST(BoxMax, HandValues) {
    const double w1 = std::sqrt(15.0), w2 = std::cbrt(22.5);
    const auto f = example_6_1(w1, w2, 2.0, 3.0);
    const double expect = 7.5 + 0.5 * std::pow(22.5, 2.0 / 3.0);
    EXPECT_NEAR(expect, 11.485, 1e-3);
    EXPECT_NEAR(box_max_F(f, 9, w1, w2), expect, 1e-12);
    EXPECT_NEAR(box_max_F(f, 9, w1, w2, {MaxStrategy::Grid, 513}), expect, 1e-9);
    EXPECT_EQ(box_max_F(zero_model(), 4, 2.0, 2.0), 0.0);

    const auto lat = lattice_ball(1);
    const auto f2 = example_6_2(lat, lat.index("0,0"), std::cbrt(4.0), 5.0);
    EXPECT_NEAR(envelope_max(*f2.envelope(), std::cbrt(4.0)), 0.5 * std::pow(4.0, 2.0 / 3.0) + 1.0, 1e-12);
}

TEST(FiniteInterval, ReproducesExampleEndpoints) {
    const auto pf = fixtures::example_6_1();
    const auto r = interval_finite(pf.problem, kFinite);
    EXPECT_EQ(r.theorem, Theorem::FiniteSystem);
    EXPECT_NEAR(r.lambda_lo / 0.07614, 1.0, 1e-3);
    EXPECT_NEAR(r.lambda_hi / 0.65303, 1.0, 1e-3);
    EXPECT_NEAR(r.phi_at_delta, 85657.5, 1e-9 * 85657.5);
    EXPECT_NEAR(r.box[0], std::sqrt(15.0), 1e-12);
    EXPECT_NEAR(r.box[1], std::cbrt(22.5), 1e-12);
    EXPECT_TRUE(r.nontrivial_certified);
    for (const char* name : {"potentials_positive", "exponents", "nonlinearity_c1", "zero_at_origin",
                             "delta_exceeds_gamma_kappa", "box_max_refinement", "interval_nonempty",
                             "phi_delta_exceeds_level"}) {
        ASSERT_NE(r.find(name), nullptr) << name;
        EXPECT_TRUE(r.find(name)->pass) << name << ": " << r.find(name)->witness;
    }
    // With r1 = 2 the s-growth exponent equals p = 2, which the strict
    // subcritical condition excludes.
    ASSERT_NE(r.find("subcritical_growth"), nullptr);
    EXPECT_FALSE(r.find("subcritical_growth")->pass);
    EXPECT_FALSE(r.valid);
}

TEST(FiniteInterval, GrowthExponentIsNeverSubcriticalForExample) {
    for (double r1 : {1.1, 1.5, 2.0}) {
        const auto pf = fixtures::example_6_1(r1, 2.5);
        EXPECT_FALSE(interval_finite(pf.problem, kFinite).find("subcritical_growth")->pass) << r1;
    }
}

/// phi(s) = (s/c)^8 / (1 + (s/c)^8): bounded, so every growth exponent
/// qualifies, and steep enough that F at delta dominates the box maximum.
NonlinearityModel sigmoid_model(double c1, double c2) {
    auto phi = [](double s, double c) {
        const double z = std::pow(s / c, 8.0);
        return z / (1.0 + z);
    };
    auto dphi = [](double s, double c) {
        const double z = std::pow(s / c, 8.0);
        return s == 0.0 ? 0.0 : 8.0 * z / (s * (1.0 + z) * (1.0 + z));
    };
    NonlinearityModel m(
        "sigmoid", [=](std::size_t, double s, double t) { return phi(s, c1) + phi(t, c2); },
        [=](std::size_t, double s, double) { return dphi(s, c1); },
        [=](std::size_t, double, double t) { return dphi(t, c2); }, {});
    m.set_growth({0.0, 0.0, 0.0, 0.0, 2.0});
    return m;
}

TEST(FiniteInterval, BoundedSteepModelIsValid) {
    auto prob = make_problem(grid3x3(), sigmoid_model(kDelta1, kDelta2), 2, 2, 2.0, 3.0, 9.0, 9.0);
    const auto r = interval_finite(prob, kFinite);
    for (const auto& h : r.hypotheses) EXPECT_TRUE(h.pass) << h.name << ": " << h.witness;
    EXPECT_TRUE(r.valid);
    EXPECT_LT(r.lambda_lo, r.lambda_hi);
    EXPECT_NEAR(r.f_at_delta, 1.0, 1e-15);
    EXPECT_NEAR(r.lambda_lo, 85657.5 / 9.0, 1e-9 * r.lambda_lo);
}

TEST(FiniteInterval, LowerEndIsEnergyRatio) {
    const auto pf = fixtures::example_6_1();
    const auto& prob = pf.problem;
    const auto r = interval_finite(prob, kFinite);
    const StatePair w{VertexFunction::constant(9, kDelta1), VertexFunction::constant(9, kDelta2)};
    EXPECT_NEAR(r.lambda_lo, phi_energy(prob, w) / psi_energy(prob, w), 1e-12 * r.lambda_lo);
    EXPECT_NEAR(action(prob, r.lambda_lo, w), 0.0, 1e-9 * phi_energy(prob, w));
}

TEST(FiniteInterval, BoundaryDeltaIsInvalid) {
    const auto pf = fixtures::example_6_1(1.5, 2.5);
    const auto k = kappa_finite(pf.problem);
    const auto r = interval_finite(pf.problem, {kGamma1, kGamma2, kGamma1 * k[0], kDelta2});
    EXPECT_FALSE(r.valid);
    EXPECT_FALSE(r.find("delta_exceeds_gamma_kappa")->pass);
}

TEST(FiniteInterval, VanishingNonlinearityHasEmptyInterval) {
    auto prob = make_problem(grid3x3(), zero_model(), 1, 1, 2.0, 3.0, 9.0, 9.0);
    const auto r = interval_finite(prob, kFinite);
    EXPECT_FALSE(r.valid);
    EXPECT_FALSE(r.find("interval_nonempty")->pass);
    EXPECT_TRUE(std::isinf(r.lambda_lo));
    EXPECT_FALSE(r.nontrivial_certified);
}

TEST(FiniteInterval, RejectsNonPositiveConstants) {
    const auto pf = fixtures::example_6_1();
    try {
        interval_finite(pf.problem, {0.0, 1.0, 1.0, 1.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BadParam);
    }
}

TEST(ScalarInterval, SupportedExampleEndpoints) {
    const auto r = supported_report();
    EXPECT_EQ(r.theorem, Theorem::LocallyFiniteScalar);
    ASSERT_TRUE(r.local_mass.has_value());
    EXPECT_EQ((*r.local_mass)[0], 16.0);
    EXPECT_NEAR(kGamma * r.kappa[0], 1.0, 1e-12);
    EXPECT_NEAR(r.lambda_lo / 0.0371, 1.0, 2e-2);
    EXPECT_NEAR(r.lambda_hi / 2.36, 1.0, 2e-2);
    EXPECT_NEAR(r.phi_at_delta, std::pow(kDelta, 3) * 16.0 / 3.0, 1e-9 * r.phi_at_delta);
    EXPECT_EQ(r.notes.size(), 3u);
    EXPECT_TRUE(r.find("measure_and_potential_floors")->pass);
    EXPECT_TRUE(r.find("first_order_operators")->pass);
    EXPECT_TRUE(r.find("delta_exceeds_gamma_kappa")->pass);
    // |F_s| outgrows a(|s|) = P(|s|) + 1 on part of the line, so the sampled
    // envelope check fails and the report is not certified.
    EXPECT_FALSE(r.find("envelope_bound")->pass);
    EXPECT_FALSE(r.valid);
}

TEST(ScalarInterval, SupportedBoundaryIsInvalid) {
    const auto r = supported_report(kGamma, kGamma * supported_report().kappa[0]);
    EXPECT_FALSE(r.find("delta_exceeds_gamma_kappa")->pass);
    EXPECT_FALSE(r.valid);
}

TEST(ScalarInterval, ZeroEnvelopeWeightGivesNoUpperEnd) {
    const auto g = lattice_ball(2);
    auto model = example_6_2(g, g.index("0,0"), std::cbrt(4.0), 5.0);
    model.set_envelope({model.envelope()->a, 0.0});
    auto prob = make_problem(g, model, 1, 1, 3.0, 2.0, 4.0, 1.0, true);
    const auto r = interval_scalar(prob, kGamma, kDelta, GraphMode::LocallyFinite, LocalFloors{g.index("0,0"), 4.0, 1.0});
    EXPECT_EQ(r.box_max, 0.0);
    EXPECT_TRUE(std::isinf(r.lambda_hi));
    EXPECT_FALSE(r.valid);
}

TEST(ScalarInterval, MissingEnvelopeIsAnError) {
    auto prob = make_problem(lattice_ball(1), testing::linear_model(1, 0), 1, 1, 3.0, 2.0, 4.0, 1.0, true);
    try {
        interval_scalar(prob, 1.0, 2.0, GraphMode::LocallyFinite, LocalFloors{0, 4.0, 1.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingEnvelope);
    }
    auto coupled = make_problem(lattice_ball(1), testing::linear_model(1, 0), 1, 1, 3.0, 2.0, 4.0, 1.0);
    try {
        interval_locally_finite(coupled, {1, 1, 2, 2}, LocalFloors{0, 4.0, 1.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingEnvelope);
    }
}

TEST(ScalarInterval, FiniteReductionOfCoupledExample) {
    const auto pf = fixtures::example_6_1(1.5, 2.5);
    ProblemSpec prob = pf.problem;
    prob.scalar = true;
    prob.h2 = VertexFunction();
    const auto r = interval_scalar(prob, kGamma1, kDelta1, GraphMode::Finite);
    EXPECT_EQ(r.theorem, Theorem::FiniteScalar);
    // The reduced box is |s| <= 3 < w1, inside the first piece w1 s - s^2/2.
    EXPECT_NEAR(r.box[0], 3.0, 1e-12);
    const double box_max = 3.0 * std::sqrt(15.0) - 4.5;
    EXPECT_NEAR(r.box_max, box_max, 1e-9);
    const double f_delta = prob.model->F(0, kDelta1, 0.0);
    EXPECT_NEAR(r.lambda_lo, std::pow(kDelta1, 2) / 2.0 * 81.0 / (f_delta * 9.0), 1e-12);
    EXPECT_NEAR(r.lambda_hi, 40.5 / (box_max * 9.0), 1e-9);
}

TEST(LocallyFiniteSystem, SupportedCoupling) {
    // Coupled version of the supported model: F(x, s, t) = F0(x, s) + F0(x, t).
    const auto g = lattice_ball(3);
    const std::size_t x0 = g.index("0,0");
    auto base = std::make_shared<NonlinearityModel>(example_6_2(g, x0, std::cbrt(4.0), 5.0));
    NonlinearityModel::Traits traits;
    traits.vertex_independent = false;
    NonlinearityModel model(
        "sum", [base](std::size_t x, double s, double t) { return base->F(x, s, 0) + base->F(x, t, 0); },
        [base](std::size_t x, double s, double) { return base->Fs(x, s, 0); },
        [base](std::size_t x, double, double t) { return base->Fs(x, t, 0); }, traits);
    model.set_envelope({[base](double r) { return 2.0 * base->envelope()->a(r); }, base->envelope()->b});
    auto prob = make_problem(g, model, 1, 1, 3.0, 3.0, 4.0, 4.0);
    const auto r = interval_locally_finite(prob, {1.0, 1.0, 3.0, 3.0}, LocalFloors{x0, 4.0, 1.0});
    ASSERT_TRUE(r.local_mass.has_value());
    EXPECT_NEAR((*r.local_mass)[0], 16.0, 1e-12);
    EXPECT_NEAR((*r.local_mass)[1], 16.0, 1e-12);
    EXPECT_NEAR(r.phi_at_delta, 2.0 * 27.0 * 16.0 / 3.0, 1e-9);
    EXPECT_NEAR(r.lambda_lo, r.phi_at_delta / model.F(x0, 3.0, 3.0), 1e-12 * r.lambda_lo);
    const double R = 2.0 * std::pow(4.0, -1.0 / 3.0) * std::cbrt(6.0);
    EXPECT_NEAR(r.box[0], R, 1e-12);
}

TEST(Reports, RoundingKeepsTwelveDigits) {
    EXPECT_EQ(report_round(0.0761373524441234), 0.0761373524441);
    EXPECT_EQ(report_round(0.0), 0.0);
    EXPECT_TRUE(std::isinf(report_round(INFINITY)));
}

}  // namespace
}  // namespace graphvar
