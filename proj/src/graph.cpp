#include "graphvar/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <utility>

namespace graphvar {
namespace {

std::string edge_label(const GraphDescription::Edge& e) {
    return "(" + e.a + ", " + e.b + ")";
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::vector<Violation> validate(const GraphDescription& desc) {
    std::vector<Violation> out;
    std::set<std::string> seen;
    for (const auto& v : desc.vertices) {
        if (!seen.insert(v.id).second) {
            out.push_back({ErrorCode::DuplicateVertex, "vertex " + v.id + " declared twice"});
        }
        if (!std::isfinite(v.mu) || !(v.mu > 0.0)) {
            out.push_back({ErrorCode::NonPositiveMeasure, "vertex " + v.id + " has mu = " + format_number(v.mu)});
        }
    }
    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& e : desc.edges) {
        if (e.a == e.b) {
            out.push_back({ErrorCode::SelfLoop, "edge " + edge_label(e) + " is a self-loop"});
            continue;
        }
        if (!seen.contains(e.a) || !seen.contains(e.b)) {
            out.push_back({ErrorCode::DanglingEdge, "edge " + edge_label(e) + " references an undeclared vertex"});
        }
        if (!std::isfinite(e.w) || !(e.w > 0.0)) {
            out.push_back({ErrorCode::NonPositiveWeight, "edge " + edge_label(e) + " has w = " + format_number(e.w)});
        }
        auto key = std::minmax(e.a, e.b);
        if (!pairs.insert({key.first, key.second}).second) {
            out.push_back({ErrorCode::DuplicateEdge, "edge " + edge_label(e) + " listed more than once"});
        }
    }
    return out;
}

WeightedGraph build_graph(const GraphDescription& desc) {
    if (auto problems = validate(desc); !problems.empty()) {
        fail(problems.front().code, problems.front().message);
    }

    WeightedGraph g;
    std::vector<const GraphDescription::Vertex*> order;
    order.reserve(desc.vertices.size());
    for (const auto& v : desc.vertices) order.push_back(&v);
    std::sort(order.begin(), order.end(), [](auto* l, auto* r) { return l->id < r->id; });

    std::map<std::string, std::size_t, std::less<>> index;
    for (const auto* v : order) {
        index.emplace(v->id, g.ids_.size());
        g.ids_.push_back(v->id);
        g.mu_.push_back(v->mu);
    }
    const std::size_t n = g.ids_.size();

    for (const auto& e : desc.edges) {
        std::size_t a = index.at(e.a);
        std::size_t b = index.at(e.b);
        if (a > b) std::swap(a, b);
        g.edges_.push_back({a, b, e.w});
    }
    std::sort(g.edges_.begin(), g.edges_.end(),
              [](const auto& l, const auto& r) { return std::tie(l.a, l.b) < std::tie(r.a, r.b); });

    std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(n);
    for (const auto& e : g.edges_) {
        rows[e.a].emplace_back(static_cast<std::uint32_t>(e.b), e.w);
        rows[e.b].emplace_back(static_cast<std::uint32_t>(e.a), e.w);
    }
    g.offsets_.assign(1, 0);
    g.degree_.assign(n, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
        std::sort(rows[x].begin(), rows[x].end());
        for (const auto& [y, w] : rows[x]) {
            g.neighbors_.push_back(y);
            g.weights_.push_back(w);
            g.degree_[x] += w;
        }
        g.offsets_.push_back(static_cast<std::uint32_t>(g.neighbors_.size()));
    }

    g.mu_min_ = n == 0 ? 0.0 : *std::min_element(g.mu_.begin(), g.mu_.end());
    g.total_measure_ = std::accumulate(g.mu_.begin(), g.mu_.end(), 0.0);
    return g;
}

std::optional<std::size_t> WeightedGraph::find(std::string_view id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - ids_.begin());
}

std::size_t WeightedGraph::index(std::string_view id) const {
    if (auto x = find(id)) return *x;
    fail(ErrorCode::UnknownVertex, "no vertex named " + std::string(id));
}

std::span<const std::uint32_t> WeightedGraph::neighbors(std::size_t x) const {
    return std::span(neighbors_).subspan(offsets_.at(x), offsets_.at(x + 1) - offsets_.at(x));
}

std::span<const double> WeightedGraph::neighbor_weights(std::size_t x) const {
    return std::span(weights_).subspan(offsets_.at(x), offsets_.at(x + 1) - offsets_.at(x));
}

double WeightedGraph::weight(std::size_t x, std::size_t y) const {
    auto nbrs = neighbors(x);
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), static_cast<std::uint32_t>(y));
    if (it == nbrs.end() || *it != y) return 0.0;
    return neighbor_weights(x)[static_cast<std::size_t>(it - nbrs.begin())];
}

std::vector<std::size_t> WeightedGraph::isolated_vertices() const {
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < size(); ++x) {
        if (offsets_[x] == offsets_[x + 1]) out.push_back(x);
    }
    return out;
}

GraphDescription WeightedGraph::describe() const {
    GraphDescription d;
    for (std::size_t x = 0; x < size(); ++x) d.vertices.push_back({ids_[x], mu_[x]});
    for (const auto& e : edges_) d.edges.push_back({ids_[e.a], ids_[e.b], e.w});
    return d;
}

double degree(const WeightedGraph& g, std::string_view x) {
    return g.degree(g.index(x));
}

VertexFunction::VertexFunction(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_) {
        if (!std::isfinite(v)) fail(ErrorCode::NonFiniteValue, "vertex function values must be finite");
    }
}

VertexFunction VertexFunction::indicator(std::size_t n, std::size_t x, double value) {
    std::vector<double> v(n, 0.0);
    v.at(x) = value;
    return VertexFunction(std::move(v));
}

VertexFunction combine(double a, const VertexFunction& u, double b, const VertexFunction& v) {
    if (u.size() != v.size()) fail(ErrorCode::DomainMismatch, "combine: size mismatch");
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * u[i] + b * v[i];
    return VertexFunction(std::move(out));
}

VertexFunction multiply(const VertexFunction& u, const VertexFunction& v) {
    if (u.size() != v.size()) fail(ErrorCode::DomainMismatch, "multiply: size mismatch");
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = u[i] * v[i];
    return VertexFunction(std::move(out));
}

double sup_norm(const VertexFunction& u) {
    double m = 0.0;
    for (double v : u.values()) m = std::max(m, std::abs(v));
    return m;
}

void require_domain(const WeightedGraph& g, const VertexFunction& u, std::string_view what) {
    if (u.size() != g.size()) {
        fail(ErrorCode::DomainMismatch, std::string(what) + " has " + std::to_string(u.size()) +
                                            " values but the graph has " + std::to_string(g.size()) + " vertices");
    }
}

double integrate(const WeightedGraph& g, const VertexFunction& u) {
    require_domain(g, u);
    return kernels::active().weighted_sum(g.mu(), u.values());
}

WeightedGraph grid3x3() {
    GraphDescription d;
    auto name = [](int r, int c) { return "x" + std::to_string(3 * r + c + 1); };
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) d.vertices.push_back({name(r, c), 1.0});
    }
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            if (c + 1 < 3) d.edges.push_back({name(r, c), name(r, c + 1), 1.0});
            if (r + 1 < 3) d.edges.push_back({name(r, c), name(r + 1, c), 1.0});
        }
    }
    return build_graph(d);
}

std::string lattice_id(int i, int j) {
    return std::to_string(i) + "," + std::to_string(j);
}

WeightedGraph lattice_ball(int radius) {
    if (radius < 1) fail(ErrorCode::BadParam, "lattice_ball radius must be >= 1, got " + std::to_string(radius));
    GraphDescription d;
    for (int i = -radius; i <= radius; ++i) {
        for (int j = -radius; j <= radius; ++j) {
            d.vertices.push_back({lattice_id(i, j), 1.0});
            if (i + 1 <= radius) d.edges.push_back({lattice_id(i, j), lattice_id(i + 1, j), 2.0});
            if (j + 1 <= radius) d.edges.push_back({lattice_id(i, j), lattice_id(i, j + 1), 2.0});
        }
    }
    return build_graph(d);
}

std::vector<std::size_t> lattice_ring(const WeightedGraph& g, int radius) {
    if (radius < 1) fail(ErrorCode::BadParam, "lattice ring radius must be >= 1, got " + std::to_string(radius));
    std::vector<std::size_t> out;
    for (int i = -radius; i <= radius; ++i) {
        for (int j = -radius; j <= radius; ++j) {
            if (std::max(std::abs(i), std::abs(j)) == radius) out.push_back(g.index(lattice_id(i, j)));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

WeightedGraph generate_builtin(std::string_view name, int radius) {
    if (name == "grid3x3") return grid3x3();
    if (name == "lattice_ball") return lattice_ball(radius);
    fail(ErrorCode::BadParam, "unknown builtin graph " + std::string(name));
}

}  // namespace graphvar
