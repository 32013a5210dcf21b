#pragma once

// Energy functionals of the coupled system
//   L_{m1,p} u + h1 |u|^{p-2} u = lambda F_u(x, u, v)
//   L_{m2,q} v + h2 |v|^{q-2} v = lambda F_v(x, u, v)
// and of its single-equation reduction (no v). Gradients are returned
// pointwise, i.e. as the representative under the mu-weighted pairing, so the
// gradient at a state is exactly the defect of the equations there.

#include <algorithm>
#include <memory>
#include <vector>

#include "graphvar/calculus.hpp"
#include "graphvar/nonlinearity.hpp"
#include "graphvar/sobolev.hpp"

namespace graphvar {

struct ProblemSpec {
    std::shared_ptr<const WeightedGraph> graph;
    std::shared_ptr<const NonlinearityModel> model;
    int m1 = 1;
    int m2 = 1;
    double p = 2.0;
    double q = 2.0;
    VertexFunction h1;
    VertexFunction h2;  // unused when scalar
    /// Single unknown u; F is evaluated at t = 0 and v stays empty.
    bool scalar = false;
    /// Vertices held at zero, strictly ascending: the ghost ring of a Dirichlet
    /// truncation. The action gradient vanishes there and solvers never move them.
    std::vector<std::size_t> boundary;

    /// Throws BadParam, NonPositivePotential, DomainMismatch.
    void validate() const;

    const WeightedGraph& g() const { return *graph; }
    SobolevSpec u_space() const { return {m1, p, h1}; }
    SobolevSpec v_space() const { return {m2, q, h2}; }
    /// Number of free scalar unknowns: n or 2n minus the held vertices.
    std::size_t unknowns() const { return (scalar ? 1 : 2) * (graph->size() - boundary.size()); }
    bool held(std::size_t x) const { return std::binary_search(boundary.begin(), boundary.end(), x); }
    /// Vertices not held at zero, ascending.
    std::vector<std::size_t> free_vertices() const;
};

struct StatePair {
    VertexFunction u;
    VertexFunction v;  // empty for scalar problems

    friend bool operator==(const StatePair&, const StatePair&) = default;
};

/// Zero state of the right shape.
StatePair zero_state(const ProblemSpec& prob);

/// Throws DomainMismatch unless w has the problem's shape.
void require_state(const ProblemSpec& prob, const StatePair& w);

/// (1/p) ||u||^p + (1/q) ||v||^q in the problem's Sobolev norms.
double phi_energy(const ProblemSpec& prob, const StatePair& w);

/// int F(x, u(x), v(x)) dmu
double psi_energy(const ProblemSpec& prob, const StatePair& w);

/// phi_energy - lambda psi_energy. lambda = 0 is accepted.
double action(const ProblemSpec& prob, double lambda, const StatePair& w);

/// (G_u, G_v) with G_u = L_{m1,p} u + h1 |u|^{p-2} u - lambda F_u and
/// G_v symmetric; d/de action(w + e phi) = int G_u phi_1 + G_v phi_2 for
/// directions phi vanishing on the boundary, so G is zero on held vertices.
StatePair action_gradient(const ProblemSpec& prob, double lambda, const StatePair& w,
                          SingularityReport* report = nullptr,
                          SingularPolicy policy = SingularPolicy::Regularize);

/// <Phi'(w1) - Phi'(w2), w1 - w2>
double monotonicity_gap(const ProblemSpec& prob, const StatePair& w1, const StatePair& w2);

/// ||u1 - u2||_{W^{m1,p}} + ||v1 - v2||_{W^{m2,q}}
double w_distance(const ProblemSpec& prob, const StatePair& a, const StatePair& b);

/// ||u||_{W^{m1,p}} + ||v||_{W^{m2,q}}
double w_norm(const ProblemSpec& prob, const StatePair& w);

}  // namespace graphvar
