#pragma once

#include "graphvar/graph.hpp"

namespace graphvar {

/// Space W^{m,l}(V) with potential h > 0.
struct SobolevSpec {
    int m = 1;
    double l = 2.0;
    VertexFunction h;

    /// Throws BadParam, NonPositivePotential, DomainMismatch.
    void validate(const WeightedGraph& g) const;
};

/// Throws NonPositivePotential unless every value is > 0.
void require_positive_potential(const VertexFunction& h, std::string_view what = "h");

/// int (|grad^m u|^l + h |u|^l) dmu, i.e. the l-th power of w_norm.
double w_norm_power(const WeightedGraph& g, const VertexFunction& u, const SobolevSpec& spec);

/// (int (|grad^m u|^l + h |u|^l) dmu)^{1/l}
double w_norm(const WeightedGraph& g, const VertexFunction& u, const SobolevSpec& spec);

/// d_l = (1 / (mu_min h_min))^{1/l}:  max|u| <= d_l ||u||_{W^{m,l}} on a finite graph.
double sup_embedding_const(const WeightedGraph& g, double l, const VertexFunction& h);

/// K_{l,r} = |V|^{1/r} / (mu_min^{1/l} h_min^{1/l}):  ||u||_{L^r} <= K ||u||_{W^{m,l}}, 1 < r < inf.
double lr_embedding_const(const WeightedGraph& g, double l, double r, const VertexFunction& h);

/// Locally finite graphs with mu >= mu0 and h >= h0 (floors are hypotheses, not inferred).
/// ||u||_inf <= h0^{-1/l} mu0^{-1/l} ||u||_{W^{1,l}}
double lf_sup_embedding_const(double l, double h0, double mu0);
/// ||u||_{L^r} <= mu0^{(l-r)/(lr)} h0^{-1/l} ||u||_{W^{1,l}},  l <= r < inf
double lf_lr_embedding_const(double l, double r, double h0, double mu0);

double min_value(const VertexFunction& f);

}  // namespace graphvar
