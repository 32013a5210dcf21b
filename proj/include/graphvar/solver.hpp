#pragma once

// Numerical critical points of the action phi - lambda psi.
//
// minimize: gradient descent with Armijo backtracking, then a damped Newton
// polish on a finite-difference Hessian. deflated_solve: Newton on the
// residual multiplied by inverse-distance factors around known points, which
// also reaches saddle points. find_three: multistart minimisation followed by
// deflation until three distinct critical points are known.

#include <cstdint>
#include <vector>

#include "graphvar/functionals.hpp"

namespace graphvar {

struct SolverConfig {
    int starts = 64;
    int max_iters = 10000;
    double grad_tol = 1e-8;
    double distinct_tol = 1e-4;
    std::uint64_t seed = 0;
    double deflation_power = 2.0;
    double deflation_shift = 1.0;
    /// Deflated Newton runs attempted after the multistart phase.
    int deflation_attempts = 64;
    /// Random starts are uniform in [-start_radius_u, start_radius_u] per
    /// component of u (same for v).
    double start_radius_u = 1.0;
    double start_radius_v = 1.0;
    /// Worker threads for the multistart phase; 0 means hardware
    /// concurrency. GRAPHVAR_THREADS caps either choice.
    int threads = 0;

    /// Throws BadParam.
    void validate() const;
};

enum class PointKind { Minimizer, Saddle, Unclassified };
std::string_view to_string(PointKind k);
PointKind point_kind_from_string(std::string_view s);

enum class SolveStatus { Converged, NoConvergence, ConvergedToKnown };

struct CriticalPoint {
    StatePair state;
    double action_value = 0.0;
    double residual_sup = 0.0;
    PointKind kind = PointKind::Unclassified;
    int iterations = 0;
    SolveStatus status = SolveStatus::NoConvergence;

    bool converged() const { return status == SolveStatus::Converged; }
};

struct SolutionSet {
    double lambda = 0.0;
    std::vector<CriticalPoint> points;
    std::vector<std::vector<double>> pairwise_distances;
    std::vector<bool> nontrivial_flags;
    /// F_s or F_t is nonzero somewhere at (0, 0), so zero cannot be a solution.
    bool zero_excluded = false;
    /// Candidates examined (multistart plus deflation runs).
    int candidates = 0;

    bool found_three() const { return points.size() >= 3; }
};

/// sup over vertices of |G_u| and |G_v|.
double residual(const ProblemSpec& prob, double lambda, const StatePair& w);

/// Solver problems need p, q >= 2 (the potential term is not Lipschitz at 0 otherwise).
void require_solvable(const ProblemSpec& prob);

/// Local minimisation from start. The returned point carries status
/// NoConvergence (and the best iterate) when max_iters is exhausted or the
/// iterate diverges. The action decreases monotonically until the residual
/// meets grad_tol; a few residual-reducing Newton steps then polish the point.
CriticalPoint minimize(const ProblemSpec& prob, double lambda, const StatePair& start, const SolverConfig& cfg);

/// Newton on M(w) G(w), M(w) = prod_k (||w - w_k||^{-power} + shift) with the
/// mu-weighted L2 distance. status is ConvergedToKnown when the limit lies
/// within distinct_tol (W-distance) of a known point.
CriticalPoint deflated_solve(const ProblemSpec& prob, double lambda, const std::vector<StatePair>& known,
                             const StatePair& start, const SolverConfig& cfg);

/// Multistart plus deflation. Never throws for a short count: check
/// found_three(). Deterministic for a fixed configuration and seed,
/// independent of the thread count.
SolutionSet find_three(const ProblemSpec& prob, double lambda, const SolverConfig& cfg);

/// Smallest eigenvalue of the mu-scaled finite-difference Hessian at w.
double hessian_min_eigenvalue(const ProblemSpec& prob, double lambda, const StatePair& w);

}  // namespace graphvar
