#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graphvar/graph.hpp"

namespace graphvar {

/// Per-vertex coefficient that is either a single constant or a full
/// VertexFunction (the latter ties the model to one graph).
class VertexCoefficient {
public:
    VertexCoefficient(double constant = 0.0) : constant_(constant) {}  // NOLINT(google-explicit-constructor)
    explicit VertexCoefficient(VertexFunction values) : values_(std::move(values)) {}

    double at(std::size_t x) const { return values_ ? (*values_)[x] : constant_; }
    bool is_constant() const noexcept { return !values_.has_value(); }
    /// Largest value over vertices (the constant itself when constant).
    double sup() const;
    /// Values expanded on a graph with n vertices.
    VertexFunction on(std::size_t n) const;

private:
    double constant_ = 0.0;
    std::optional<VertexFunction> values_;
};

/// Witness of F(x,s,t) <= f1(x)|s|^alpha + f2(x)|t|^beta + g(x).
struct GrowthBound {
    double alpha = 0.0;
    double beta = 0.0;
    VertexCoefficient f1;
    VertexCoefficient f2;
    VertexCoefficient g;
};

/// Witness of |F|, |F_s|, |F_t| <= a(|(s,t)|) b(x).
struct Envelope {
    std::function<double(double)> a;
    VertexCoefficient b;
};

/// Nonlinearity F(x, s, t) with its partial derivatives and the metadata the
/// interval theorems need. Immutable; evaluators must be pure.
class NonlinearityModel {
public:
    using Evaluator = std::function<double(std::size_t x, double s, double t)>;

    struct Traits {
        /// F does not depend on the vertex.
        bool vertex_independent = true;
        /// F does not depend on t (scalar equations).
        bool t_independent = false;
        /// Over any box [-S,S]x[-T,T] the maximum of F is attained at a
        /// corner or an axis extreme, so the "corner" max strategy is exact.
        bool corner_maximal = false;
    };

    NonlinearityModel(std::string name, Evaluator F, Evaluator Fs, Evaluator Ft, Traits traits);

    const std::string& name() const noexcept { return name_; }
    double F(std::size_t x, double s, double t) const { return F_(x, s, t); }
    double Fs(std::size_t x, double s, double t) const { return Fs_(x, s, t); }
    double Ft(std::size_t x, double s, double t) const { return Ft_(x, s, t); }
    const Traits& traits() const noexcept { return traits_; }

    const std::optional<GrowthBound>& growth() const noexcept { return growth_; }
    const std::optional<Envelope>& envelope() const noexcept { return envelope_; }
    NonlinearityModel& set_growth(GrowthBound g);
    NonlinearityModel& set_envelope(Envelope e);

    /// Abscissae (signed) where a piece of F changes; derivative checks keep
    /// away from these.
    const std::vector<double>& seams_s() const noexcept { return seams_s_; }
    const std::vector<double>& seams_t() const noexcept { return seams_t_; }
    NonlinearityModel& set_seams(std::vector<double> s, std::vector<double> t);

    /// Region and vertices that random checks should sample.
    struct SampleHints {
        double s_extent = 10.0;
        double t_extent = 10.0;
        std::vector<std::size_t> vertices{0};
    };
    const SampleHints& sample_hints() const noexcept { return hints_; }
    NonlinearityModel& set_sample_hints(SampleHints h);

    /// JSON parameters the model was built from (for reports and manifests).
    const std::string& descriptor() const noexcept { return descriptor_; }
    NonlinearityModel& set_descriptor(std::string d);

private:
    std::string name_;
    Evaluator F_, Fs_, Ft_;
    Traits traits_;
    std::optional<GrowthBound> growth_;
    std::optional<Envelope> envelope_;
    std::vector<double> seams_s_, seams_t_;
    SampleHints hints_;
    std::string descriptor_;
};

/// Nonlinearity of the finite-graph example: F(x,s,t) = A(s) + B(t) whose
/// partials are the three-piece profiles
///   A'(s) = w1 - |s| | |s|^3 - w1^3 | (4w1)^r1 |s|^{3-r1} - w1^3
///   B'(t) = w2 - |t| | |t|^4 - w2^4 | (5w2)^r2 |t|^{4-r2} - w2^4
/// with seams at |s| in {w1, 4w1}, |t| in {w2, 5w2}. A and B are the
/// primitives vanishing at 0, so they are odd. Throws BadParam unless
/// w1, w2 > 0 and (r1, r2) in (1,2] x (1,3].
NonlinearityModel example_6_1(double omega1, double omega2, double r1, double r2);

/// Literal nine-region antiderivative table shipped with the example,
/// written in |s|, |t|. Used only to cross-check example_6_1.
double example_6_1_displayed_F(double omega1, double omega2, double r1, double r2, double s, double t);

struct AntiderivativeCheck {
    /// Largest |integrated - displayed| / max(1, |displayed|) over s, t >= 0.
    double max_mismatch_first_quadrant = 0.0;
    /// Same for samples with s < 0 or t < 0.
    double max_mismatch_other_quadrants = 0.0;
    std::size_t samples = 0;
    bool matches_first_quadrant() const { return max_mismatch_first_quadrant <= 1e-12; }
};

/// Compares the integrated partials against the displayed table. Also runs a
/// quadrature of the displayed partials as an independent third route.
AntiderivativeCheck cross_check_example_6_1(double omega1, double omega2, double r1, double r2,
                                            std::size_t samples = 2000, std::uint64_t seed = 7);

/// Scalar nonlinearity of the locally finite example, supported at x0:
///   f(x0,s) = w - |s| | |s|^5 - w^5 | (6w)^r |s|^{5-r} - w^5
/// seams at |s| in {w, 6w} (the middle piece includes 6w), F = 0 elsewhere.
/// Envelope a(r) = P(r) + 1 with P the primitive on r >= 0, b = 1_{x0}.
/// Throws BadParam unless w > 0 and r in (3,5].
NonlinearityModel example_6_2(const WeightedGraph& g, std::size_t x0, double omega, double r);

/// Literal three-piece primitive shipped with the example, in |s|.
double example_6_2_displayed_F(double omega, double r, double s);

/// Tabulated F on a rectilinear (s,t) grid with bilinear interpolation,
/// extended beyond the grid by the border cells' bilinear formula. Partials
/// come from optional tables (interpolated the same way) or from the
/// interpolant itself.
struct TabulatedNonlinearity {
    std::vector<double> s;
    std::vector<double> t;
    std::vector<std::vector<double>> F;   // F[i][j] at (s[i], t[j])
    std::vector<std::vector<double>> Fs;  // optional
    std::vector<std::vector<double>> Ft;  // optional
};
NonlinearityModel tabulated(TabulatedNonlinearity table);

struct DerivativeReport {
    double max_discrepancy = 0.0;  // |fd - analytic| / max(1, |analytic|)
    double worst_s = 0.0;
    double worst_t = 0.0;
    std::size_t samples_checked = 0;
    bool passed = true;
};

struct DerivativeCheckOptions {
    std::uint64_t seed = 1;
    /// Record the worst discrepancy instead of throwing.
    bool report_only = false;
    /// Restrict |s| (and |t|) to [lo, hi]; defaults to the model's sample box.
    std::optional<std::pair<double, double>> abs_s_range;
    std::optional<std::pair<double, double>> abs_t_range;
};

/// Central differences of F against Fs and Ft at random points, skipping
/// points within 10*step of a seam. Tolerance per sample:
/// max(1e-6, 1e-4 |analytic|). Throws InconsistentDerivative on the first
/// violation unless options.report_only.
DerivativeReport derivative_consistency(const NonlinearityModel& model, std::size_t samples, double step,
                                        const DerivativeCheckOptions& options = {});

}  // namespace graphvar
