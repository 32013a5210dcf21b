#include "graphvar/calculus.hpp"

#include <cmath>
#include <string>

namespace graphvar {
namespace {

std::vector<double> buffer(const WeightedGraph& g) {
    return std::vector<double>(g.size());
}

bool all_zero(const VertexFunction& f) {
    for (double v : f.values()) {
        if (v != 0.0) return false;
    }
    return true;
}

// c(x) = |grad^m u|^{p-2}(x)
std::vector<double> coefficient(const VertexFunction& norm, double p, SingularityReport* report,
                                SingularPolicy policy) {
    std::vector<double> c(norm.size());
    for (std::size_t x = 0; x < c.size(); ++x) c[x] = guarded_power(norm[x], p - 2.0, report, policy);
    return c;
}

}  // namespace

void OperatorRequest::validate() const {
    if (m < 1) fail(ErrorCode::BadParam, "operator order m must be >= 1, got " + std::to_string(m));
    if (!(p > 1.0)) fail(ErrorCode::BadParam, "exponent p must be > 1");
}

double guarded_power(double base_abs, double exponent, SingularityReport* report, SingularPolicy policy) {
    if (exponent >= 0.0 || base_abs != 0.0) return std::pow(base_abs, exponent);
    if (policy == SingularPolicy::Throw) {
        fail(ErrorCode::SingularExponent, "negative power of a vanishing gradient");
    }
    if (report != nullptr) {
        report->regularized = true;
        ++report->vertices;
    }
    return std::pow(kRegularization, exponent);
}

VertexFunction gamma(const WeightedGraph& g, const VertexFunction& u, const VertexFunction& v) {
    require_domain(g, u, "u");
    require_domain(g, v, "v");
    auto out = buffer(g);
    kernels::active().gamma(g.adjacency(), g.mu(), u.values(), v.values(), out);
    return VertexFunction(std::move(out));
}

VertexFunction grad_norm(const WeightedGraph& g, const VertexFunction& u) {
    VertexFunction out = gamma(g, u, u);
    // Rounding in the sum cannot make Gamma(u,u) negative: every term is w*d*d >= 0.
    for (double& v : out.values()) v = std::sqrt(v);
    return out;
}

VertexFunction laplacian(const WeightedGraph& g, const VertexFunction& u) {
    require_domain(g, u);
    auto out = buffer(g);
    kernels::active().laplacian(g.adjacency(), g.mu(), u.values(), out);
    return VertexFunction(std::move(out));
}

VertexFunction iterated_laplacian(const WeightedGraph& g, const VertexFunction& u, int k) {
    if (k < 0) fail(ErrorCode::BadParam, "iterated_laplacian: negative power");
    require_domain(g, u);
    VertexFunction w = u;
    for (int i = 0; i < k; ++i) w = laplacian(g, w);
    return w;
}

VertexFunction m_grad_norm(const WeightedGraph& g, const VertexFunction& u, int m) {
    OperatorRequest{m, 2.0}.validate();
    if (m % 2 == 1) return grad_norm(g, iterated_laplacian(g, u, (m - 1) / 2));
    VertexFunction w = iterated_laplacian(g, u, m / 2);
    for (double& v : w.values()) v = std::abs(v);
    return w;
}

VertexFunction p_laplacian(const WeightedGraph& g, const VertexFunction& u, double p, SingularityReport* report,
                           SingularPolicy policy) {
    OperatorRequest{1, p}.validate();
    const VertexFunction norm = grad_norm(g, u);
    if (p < 2.0 && all_zero(norm)) return VertexFunction::zeros(g.size());
    const auto c = coefficient(norm, p, report, policy);
    auto out = buffer(g);
    kernels::active().weighted_flux(g.adjacency(), g.mu(), c, u.values(), out);
    return VertexFunction(std::move(out));
}

double poly_lap_weak(const WeightedGraph& g, const VertexFunction& u, const VertexFunction& phi, int m, double p,
                     SingularityReport* report, SingularPolicy policy) {
    OperatorRequest{m, p}.validate();
    require_domain(g, u, "u");
    require_domain(g, phi, "phi");
    const int k = m / 2;
    const VertexFunction du = iterated_laplacian(g, u, k);
    const VertexFunction dphi = iterated_laplacian(g, phi, k);
    const VertexFunction norm = m % 2 == 1 ? grad_norm(g, du) : [&] {
        VertexFunction a = du;
        for (double& v : a.values()) v = std::abs(v);
        return a;
    }();
    if (p < 2.0 && all_zero(norm)) return 0.0;
    const VertexFunction c(coefficient(norm, p, report, policy));
    if (m % 2 == 1) return pairing(g, c, gamma(g, du, dphi));
    return kernels::active().weighted_dot(g.mu(), multiply(c, du).values(), dphi.values());
}

VertexFunction poly_lap_pointwise(const WeightedGraph& g, const VertexFunction& u, int m, double p,
                                  SingularityReport* report, SingularPolicy policy) {
    OperatorRequest{m, p}.validate();
    require_domain(g, u);
    std::vector<double> out(g.size());
    for (std::size_t x = 0; x < g.size(); ++x) {
        const auto indicator = VertexFunction::indicator(g.size(), x);
        out[x] = poly_lap_weak(g, u, indicator, m, p, report, policy) / g.mu(x);
    }
    return VertexFunction(std::move(out));
}

VertexFunction poly_lap_apply(const WeightedGraph& g, const VertexFunction& u, int m, double p,
                              SingularityReport* report, SingularPolicy policy) {
    OperatorRequest{m, p}.validate();
    require_domain(g, u);
    const int k = m / 2;
    const VertexFunction du = iterated_laplacian(g, u, k);
    if (m % 2 == 1) {
        const VertexFunction norm = grad_norm(g, du);
        if (p < 2.0 && all_zero(norm)) return VertexFunction::zeros(g.size());
        const auto c = coefficient(norm, p, report, policy);
        auto flux = buffer(g);
        kernels::active().weighted_flux(g.adjacency(), g.mu(), c, du.values(), flux);
        VertexFunction out = iterated_laplacian(g, VertexFunction(std::move(flux)), k);
        for (double& v : out.values()) v = -v;
        return out;
    }
    VertexFunction z = du;
    bool vanishing = true;
    for (std::size_t x = 0; x < z.size(); ++x) {
        if (du[x] != 0.0) vanishing = false;
    }
    if (p < 2.0 && vanishing) return VertexFunction::zeros(g.size());
    for (std::size_t x = 0; x < z.size(); ++x) {
        z[x] = guarded_power(std::abs(du[x]), p - 2.0, report, policy) * du[x];
    }
    return iterated_laplacian(g, z, k);
}

double lr_norm(const WeightedGraph& g, const VertexFunction& u, double r) {
    require_domain(g, u);
    if (!(r >= 1.0)) fail(ErrorCode::BadParam, "lr_norm requires r >= 1");
    std::vector<double> powered(u.size());
    for (std::size_t x = 0; x < u.size(); ++x) powered[x] = std::pow(std::abs(u[x]), r);
    return std::pow(kernels::active().weighted_sum(g.mu(), powered), 1.0 / r);
}

double pairing(const WeightedGraph& g, const VertexFunction& u, const VertexFunction& v) {
    require_domain(g, u, "u");
    require_domain(g, v, "v");
    return kernels::active().weighted_dot(g.mu(), u.values(), v.values());
}

}  // namespace graphvar
