#include "graphvar/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "graphvar/calculus.hpp"

namespace graphvar {

double min_value(const VertexFunction& f) {
    if (f.empty()) fail(ErrorCode::BadParam, "min_value of an empty function");
    return *std::min_element(f.values().begin(), f.values().end());
}

void require_positive_potential(const VertexFunction& h, std::string_view what) {
    for (double v : h.values()) {
        if (!(v > 0.0)) fail(ErrorCode::NonPositivePotential, std::string(what) + " must be > 0 at every vertex");
    }
}

void SobolevSpec::validate(const WeightedGraph& g) const {
    if (m < 1) fail(ErrorCode::BadParam, "Sobolev order m must be >= 1");
    if (!(l > 1.0)) fail(ErrorCode::BadParam, "Sobolev exponent l must be > 1");
    require_domain(g, h, "h");
    require_positive_potential(h);
}

double w_norm_power(const WeightedGraph& g, const VertexFunction& u, const SobolevSpec& spec) {
    spec.validate(g);
    require_domain(g, u);
    const VertexFunction grad = m_grad_norm(g, u, spec.m);
    std::vector<double> density(g.size());
    for (std::size_t x = 0; x < g.size(); ++x) {
        density[x] = std::pow(grad[x], spec.l) + spec.h[x] * std::pow(std::abs(u[x]), spec.l);
    }
    return kernels::active().weighted_sum(g.mu(), density);
}

double w_norm(const WeightedGraph& g, const VertexFunction& u, const SobolevSpec& spec) {
    return std::pow(w_norm_power(g, u, spec), 1.0 / spec.l);
}

double sup_embedding_const(const WeightedGraph& g, double l, const VertexFunction& h) {
    require_domain(g, h, "h");
    require_positive_potential(h);
    if (!(l > 1.0)) fail(ErrorCode::BadParam, "embedding exponent l must be > 1");
    return std::pow(1.0 / (g.mu_min() * min_value(h)), 1.0 / l);
}

double lr_embedding_const(const WeightedGraph& g, double l, double r, const VertexFunction& h) {
    require_domain(g, h, "h");
    require_positive_potential(h);
    if (!(l > 1.0)) fail(ErrorCode::BadParam, "embedding exponent l must be > 1");
    if (!(r > 1.0) || !std::isfinite(r)) fail(ErrorCode::BadParam, "L^r embedding needs 1 < r < inf");
    return std::pow(g.total_measure(), 1.0 / r) / (std::pow(g.mu_min(), 1.0 / l) * std::pow(min_value(h), 1.0 / l));
}

double lf_sup_embedding_const(double l, double h0, double mu0) {
    if (!(h0 > 0.0) || !(mu0 > 0.0)) fail(ErrorCode::NonPositivePotential, "floors h0, mu0 must be > 0");
    if (!(l > 1.0)) fail(ErrorCode::BadParam, "embedding exponent l must be > 1");
    return std::pow(h0, -1.0 / l) * std::pow(mu0, -1.0 / l);
}

double lf_lr_embedding_const(double l, double r, double h0, double mu0) {
    if (!(h0 > 0.0) || !(mu0 > 0.0)) fail(ErrorCode::NonPositivePotential, "floors h0, mu0 must be > 0");
    if (!(l > 1.0) || !(r >= l) || !std::isfinite(r)) fail(ErrorCode::BadParam, "need 1 < l <= r < inf");
    return std::pow(mu0, (l - r) / (l * r)) * std::pow(h0, -1.0 / l);
}

}  // namespace graphvar
