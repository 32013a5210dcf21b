#pragma once

// Differential operators on weighted graphs.
//
// Sign convention: the poly-Laplacian L_{m,p} is defined by its weak form
//   int (L_{m,p} u) phi dmu = int |grad^m u|^{p-2} Gamma(D u, D phi) dmu      (m odd)
//                           = int |grad^m u|^{p-2} (D u)(D phi) dmu           (m even)
// with D = Delta^{floor(m/2)}, so L_{1,p} = -Delta_p and L_{2,2} = Delta^2.

#include <cstddef>

#include "graphvar/graph.hpp"

namespace graphvar {

/// Order and exponent of a poly-Laplacian; m >= 1, p > 1.
struct OperatorRequest {
    int m = 1;
    double p = 2.0;

    /// Throws BadParam.
    void validate() const;
};

/// Records whether a negative power |.|^{p-2} was evaluated at a zero base
/// and replaced by (0 + kRegularization)^{p-2}.
struct SingularityReport {
    bool regularized = false;
    std::size_t vertices = 0;
};

inline constexpr double kRegularization = 1e-12;

/// How a caller wants zero bases of negative powers treated.
enum class SingularPolicy { Regularize, Throw };

VertexFunction gamma(const WeightedGraph& g, const VertexFunction& u, const VertexFunction& v);
VertexFunction grad_norm(const WeightedGraph& g, const VertexFunction& u);
VertexFunction laplacian(const WeightedGraph& g, const VertexFunction& u);
/// Delta^k u; k = 0 returns u.
VertexFunction iterated_laplacian(const WeightedGraph& g, const VertexFunction& u, int k);
/// |grad^m u|: |grad Delta^{(m-1)/2} u| for odd m, |Delta^{m/2} u| for even m.
VertexFunction m_grad_norm(const WeightedGraph& g, const VertexFunction& u, int m);

VertexFunction p_laplacian(const WeightedGraph& g, const VertexFunction& u, double p,
                           SingularityReport* report = nullptr,
                           SingularPolicy policy = SingularPolicy::Regularize);

/// Right-hand side of the weak form above for the test function phi.
double poly_lap_weak(const WeightedGraph& g, const VertexFunction& u, const VertexFunction& phi, int m, double p,
                     SingularityReport* report = nullptr, SingularPolicy policy = SingularPolicy::Regularize);

/// Reference pointwise L_{m,p} u: tests the weak form against each
/// indicator 1_x and divides by mu(x). O(n^2); used as the oracle for
/// poly_lap_apply.
VertexFunction poly_lap_pointwise(const WeightedGraph& g, const VertexFunction& u, int m, double p,
                                  SingularityReport* report = nullptr,
                                  SingularPolicy policy = SingularPolicy::Regularize);

/// Same operator in O(m |E|) by moving D onto the coefficient field:
///   even m: D(c D u),  odd m: -D(div_c(D u)),  c = |grad^m u|^{p-2}.
VertexFunction poly_lap_apply(const WeightedGraph& g, const VertexFunction& u, int m, double p,
                              SingularityReport* report = nullptr,
                              SingularPolicy policy = SingularPolicy::Regularize);

/// (sum mu |u|^r)^{1/r}; r >= 1.
double lr_norm(const WeightedGraph& g, const VertexFunction& u, double r);

/// sum_x mu(x) u(x) v(x)
double pairing(const WeightedGraph& g, const VertexFunction& u, const VertexFunction& v);

/// |b|^{e} for a possibly negative exponent e, applying the singular policy
/// at b == 0. Shared with the functionals.
double guarded_power(double base_abs, double exponent, SingularityReport* report, SingularPolicy policy);

}  // namespace graphvar
