#pragma once

// Admissible lambda intervals of the three-solution theorems, with the
// hypothesis checks that make an interval trustworthy.
//
//   finite system           (1/Lambda2, 1/Lambda1)
//   locally finite system   (1/Theta2,  1/Theta1)
// and the single-equation analogues of both.

#include <optional>
#include <string>
#include <vector>

#include "graphvar/functionals.hpp"

namespace graphvar {

enum class Theorem { FiniteSystem, LocallyFiniteSystem, FiniteScalar, LocallyFiniteScalar };

/// Stable label written to reports: "T1.1", "T1.2", "T5.1", "T5.2".
std::string_view to_string(Theorem t);
Theorem theorem_from_string(std::string_view s);

struct HypothesisCheck {
    std::string name;
    bool pass = false;
    std::string witness;
};

struct IntervalReport {
    Theorem theorem = Theorem::FiniteSystem;
    std::vector<double> kappa;  // kappa1[, kappa2]
    std::vector<double> box;    // (s_max, t_max), or the single radius bound
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    std::vector<HypothesisCheck> hypotheses;
    bool valid = false;

    // Ingredients, for cross-checks.
    double box_max = 0.0;       // max F over the box, or max of the envelope
    double f_at_delta = 0.0;    // inf_x F(x, delta) or F(x0, delta)
    double phi_at_delta = 0.0;  // energy of the test state built from delta
    double gamma_level = 0.0;   // gamma1^p + gamma2^q (or gamma^p)
    std::optional<std::vector<double>> local_mass;
    /// F_s or F_t is nonzero at (x, 0, 0) for some x, so the zero state is not a solution.
    bool nontrivial_certified = false;
    std::vector<std::string> notes;

    const HypothesisCheck* find(std::string_view name) const;
};

/// ((1/p) int h1)^{-1/p}, ((1/q) int h2)^{-1/q}; the second entry is absent for scalar problems.
std::vector<double> kappa_finite(const ProblemSpec& prob);

struct LocalMass {
    double M1 = 0.0;
    std::optional<double> M2;
};

/// M = (deg(x0)/(2 mu(x0)))^{p/2} mu(x0) + h(x0) mu(x0) + sum_{y~x0} (w/(2 mu(y)))^{p/2} mu(y)
/// for (p, h1) and (q, h2). Pass h2 empty to omit M2. Throws UnknownVertex.
LocalMass local_mass(const WeightedGraph& g, std::size_t x0, double p, double q, const VertexFunction& h1,
                     const VertexFunction& h2);

enum class MaxStrategy {
    /// Corner strategy when the model declares it exact, otherwise grid.
    Auto,
    /// 513-point grid per axis plus golden-section refinement of the best cell.
    Grid,
    /// Box corners, axis extremes and the origin only.
    Corner,
};

struct MaxOptions {
    MaxStrategy strategy = MaxStrategy::Auto;
    int grid_points = 513;
};

/// max over vertices and |s| <= s_max, |t| <= t_max of F. For t-independent
/// models t_max is ignored. Throws BadParam unless s_max, t_max > 0.
double box_max_F(const NonlinearityModel& model, std::size_t vertex_count, double s_max, double t_max,
                 const MaxOptions& options = {});

/// max of the envelope a(r) over 0 <= r <= radius.
double envelope_max(const Envelope& envelope, double radius, const MaxOptions& options = {});

struct SystemConstants {
    double gamma1 = 0.0, gamma2 = 0.0;
    double delta1 = 0.0, delta2 = 0.0;
};

struct LocalFloors {
    std::size_t x0 = 0;
    double h0 = 0.0;
    double mu0 = 0.0;
};

/// Finite graph, coupled system.
IntervalReport interval_finite(const ProblemSpec& prob, const SystemConstants& c, const MaxOptions& options = {});

/// Locally finite (truncated) graph, coupled system with m1 = m2 = 1.
/// Throws MissingEnvelope when the model has no envelope.
IntervalReport interval_locally_finite(const ProblemSpec& prob, const SystemConstants& c, const LocalFloors& floors,
                                       const MaxOptions& options = {});

enum class GraphMode { Finite, LocallyFinite };

/// Single equation. floors are required for LocallyFinite.
IntervalReport interval_scalar(const ProblemSpec& prob, double gamma, double delta, GraphMode mode,
                               const std::optional<LocalFloors>& floors = std::nullopt,
                               const MaxOptions& options = {});

/// Round to 12 significant digits (the precision reports carry).
double report_round(double v);

}  // namespace graphvar
