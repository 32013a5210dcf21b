#include "graphvar/functionals.hpp"

#include <cmath>

namespace graphvar {
namespace {

// h |s|^{r-2} s, written so that r < 2 stays finite at s = 0.
double potential_term(double h, double s, double r) {
    if (s == 0.0) return 0.0;
    return h * std::copysign(std::pow(std::abs(s), r - 1.0), s);
}

VertexFunction phi_gradient_part(const WeightedGraph& g, const VertexFunction& u, int m, double r,
                                 const VertexFunction& h, SingularityReport* report, SingularPolicy policy) {
    VertexFunction out = poly_lap_apply(g, u, m, r, report, policy);
    for (std::size_t x = 0; x < g.size(); ++x) out[x] += potential_term(h[x], u[x], r);
    return out;
}

double t_at(const StatePair& w, std::size_t x) { return w.v.empty() ? 0.0 : w.v[x]; }

}  // namespace

void ProblemSpec::validate() const {
    if (!graph) fail(ErrorCode::BadParam, "problem has no graph");
    if (!model) fail(ErrorCode::BadParam, "problem has no nonlinearity");
    u_space().validate(*graph);
    if (!(p > 1.0)) fail(ErrorCode::BadParam, "p must be > 1");
    if (!scalar) {
        v_space().validate(*graph);
        if (!(q > 1.0)) fail(ErrorCode::BadParam, "q must be > 1");
    }
    for (std::size_t i = 0; i < boundary.size(); ++i) {
        if (boundary[i] >= graph->size()) fail(ErrorCode::BadParam, "boundary vertex index out of range");
        if (i > 0 && boundary[i] <= boundary[i - 1]) fail(ErrorCode::BadParam, "boundary must be strictly ascending");
    }
    if (boundary.size() >= graph->size()) fail(ErrorCode::BadParam, "boundary leaves no free vertex");
}

std::vector<std::size_t> ProblemSpec::free_vertices() const {
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < graph->size(); ++x) {
        if (!held(x)) out.push_back(x);
    }
    return out;
}

StatePair zero_state(const ProblemSpec& prob) {
    const std::size_t n = prob.g().size();
    return {VertexFunction::zeros(n), prob.scalar ? VertexFunction{} : VertexFunction::zeros(n)};
}

void require_state(const ProblemSpec& prob, const StatePair& w) {
    require_domain(prob.g(), w.u, "u");
    if (prob.scalar) {
        if (!w.v.empty()) fail(ErrorCode::DomainMismatch, "scalar problem state carries a v component");
    } else {
        require_domain(prob.g(), w.v, "v");
    }
}

double phi_energy(const ProblemSpec& prob, const StatePair& w) {
    require_state(prob, w);
    double value = w_norm_power(prob.g(), w.u, prob.u_space()) / prob.p;
    if (!prob.scalar) value += w_norm_power(prob.g(), w.v, prob.v_space()) / prob.q;
    return value;
}

double psi_energy(const ProblemSpec& prob, const StatePair& w) {
    require_state(prob, w);
    const auto& g = prob.g();
    std::vector<double> density(g.size());
    for (std::size_t x = 0; x < g.size(); ++x) density[x] = prob.model->F(x, w.u[x], t_at(w, x));
    return kernels::active().weighted_sum(g.mu(), density);
}

double action(const ProblemSpec& prob, double lambda, const StatePair& w) {
    if (!(lambda >= 0.0)) fail(ErrorCode::BadParam, "lambda must be >= 0");
    return phi_energy(prob, w) - lambda * psi_energy(prob, w);
}

StatePair action_gradient(const ProblemSpec& prob, double lambda, const StatePair& w, SingularityReport* report,
                          SingularPolicy policy) {
    if (!(lambda >= 0.0)) fail(ErrorCode::BadParam, "lambda must be >= 0");
    require_state(prob, w);
    const auto& g = prob.g();
    StatePair out;
    out.u = phi_gradient_part(g, w.u, prob.m1, prob.p, prob.h1, report, policy);
    for (std::size_t x = 0; x < g.size(); ++x) out.u[x] -= lambda * prob.model->Fs(x, w.u[x], t_at(w, x));
    if (!prob.scalar) {
        out.v = phi_gradient_part(g, w.v, prob.m2, prob.q, prob.h2, report, policy);
        for (std::size_t x = 0; x < g.size(); ++x) out.v[x] -= lambda * prob.model->Ft(x, w.u[x], w.v[x]);
    }
    for (std::size_t x : prob.boundary) {
        out.u[x] = 0.0;
        if (!prob.scalar) out.v[x] = 0.0;
    }
    return out;
}

double monotonicity_gap(const ProblemSpec& prob, const StatePair& w1, const StatePair& w2) {
    require_state(prob, w1);
    require_state(prob, w2);
    const auto& g = prob.g();
    const VertexFunction du = combine(1.0, w1.u, -1.0, w2.u);
    double gap = pairing(g,
                         combine(1.0, phi_gradient_part(g, w1.u, prob.m1, prob.p, prob.h1, nullptr, {}), -1.0,
                                 phi_gradient_part(g, w2.u, prob.m1, prob.p, prob.h1, nullptr, {})),
                         du);
    if (!prob.scalar) {
        const VertexFunction dv = combine(1.0, w1.v, -1.0, w2.v);
        gap += pairing(g,
                       combine(1.0, phi_gradient_part(g, w1.v, prob.m2, prob.q, prob.h2, nullptr, {}), -1.0,
                               phi_gradient_part(g, w2.v, prob.m2, prob.q, prob.h2, nullptr, {})),
                       dv);
    }
    return gap;
}

double w_norm(const ProblemSpec& prob, const StatePair& w) {
    require_state(prob, w);
    double n = graphvar::w_norm(prob.g(), w.u, prob.u_space());
    if (!prob.scalar) n += graphvar::w_norm(prob.g(), w.v, prob.v_space());
    return n;
}

double w_distance(const ProblemSpec& prob, const StatePair& a, const StatePair& b) {
    StatePair d{combine(1.0, a.u, -1.0, b.u), prob.scalar ? VertexFunction{} : combine(1.0, a.v, -1.0, b.v)};
    return w_norm(prob, d);
}

}  // namespace graphvar
