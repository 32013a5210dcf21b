#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "graphvar/error.hpp"
#include "graphvar/kernels.hpp"

namespace graphvar {

/// Raw, unvalidated graph input as read from a file or assembled in code.
struct GraphDescription {
    struct Vertex {
        std::string id;
        double mu = 1.0;
    };
    struct Edge {
        std::string a;
        std::string b;
        double w = 1.0;
    };
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
};

struct Violation {
    ErrorCode code;
    std::string message;
};

/// All invariant violations in `desc`, in input order. Empty means valid.
std::vector<Violation> validate(const GraphDescription& desc);

/// Finite weighted graph with vertex measure. Immutable once built.
///
/// Vertices are indexed 0..n-1 in lexicographic order of their identifiers;
/// every per-vertex array in the library uses this order. Neighbour lists are
/// sorted by index so all sums over y ~ x run in a fixed order.
class WeightedGraph {
public:
    struct Edge {
        std::size_t a;  // a < b
        std::size_t b;
        double w;

        friend bool operator==(const Edge&, const Edge&) = default;
    };

    WeightedGraph() = default;

    std::size_t size() const noexcept { return ids_.size(); }
    const std::string& id(std::size_t x) const { return ids_.at(x); }
    std::span<const std::string> ids() const noexcept { return ids_; }
    std::optional<std::size_t> find(std::string_view id) const;
    /// Throws UnknownVertex.
    std::size_t index(std::string_view id) const;

    double mu(std::size_t x) const { return mu_.at(x); }
    std::span<const double> mu() const noexcept { return mu_; }
    double mu_min() const noexcept { return mu_min_; }
    /// |V| = sum of mu.
    double total_measure() const noexcept { return total_measure_; }

    std::span<const Edge> edges() const noexcept { return edges_; }
    double degree(std::size_t x) const { return degree_.at(x); }

    std::span<const std::uint32_t> neighbors(std::size_t x) const;
    std::span<const double> neighbor_weights(std::size_t x) const;
    /// Weight of edge xy, or 0 when x and y are not adjacent.
    double weight(std::size_t x, std::size_t y) const;

    kernels::Adjacency adjacency() const noexcept { return {offsets_, neighbors_, weights_}; }

    std::vector<std::size_t> isolated_vertices() const;

    /// Lossless inverse of build_graph.
    GraphDescription describe() const;

    friend WeightedGraph build_graph(const GraphDescription& desc);
    friend bool operator==(const WeightedGraph&, const WeightedGraph&) = default;

private:
    std::vector<std::string> ids_;
    std::vector<double> mu_;
    std::vector<Edge> edges_;
    std::vector<double> degree_;
    std::vector<std::uint32_t> offsets_;
    std::vector<std::uint32_t> neighbors_;
    std::vector<double> weights_;
    double mu_min_ = 0.0;
    double total_measure_ = 0.0;
};

/// Throws the ErrorCode of the first violation found by validate().
WeightedGraph build_graph(const GraphDescription& desc);

/// deg(x) = sum of incident edge weights. Throws UnknownVertex.
double degree(const WeightedGraph& g, std::string_view x);

/// Real value per vertex, in the graph's vertex order. Values are finite.
class VertexFunction {
public:
    VertexFunction() = default;
    explicit VertexFunction(std::vector<double> values);
    static VertexFunction constant(std::size_t n, double c) { return VertexFunction(std::vector<double>(n, c)); }
    static VertexFunction zeros(std::size_t n) { return constant(n, 0.0); }
    static VertexFunction indicator(std::size_t n, std::size_t x, double value = 1.0);

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t x) const { return values_[x]; }
    double& operator[](std::size_t x) { return values_[x]; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }
    const std::vector<double>& vector() const noexcept { return values_; }
    bool empty() const noexcept { return values_.empty(); }

    friend bool operator==(const VertexFunction&, const VertexFunction&) = default;

private:
    std::vector<double> values_;
};

/// a*u + b*v, elementwise.
VertexFunction combine(double a, const VertexFunction& u, double b, const VertexFunction& v);
VertexFunction multiply(const VertexFunction& u, const VertexFunction& v);
double sup_norm(const VertexFunction& u);

/// Throws DomainMismatch unless u lives on g.
void require_domain(const WeightedGraph& g, const VertexFunction& u, std::string_view what = "u");

/// sum_x mu(x) u(x)
double integrate(const WeightedGraph& g, const VertexFunction& u);

/// 3x3 grid x1..x9 (row-major), mu = 1, w = 1, 12 edges.
WeightedGraph grid3x3();

/// Points of Z^2 with sup-norm distance <= radius from the origin "0,0";
/// nearest-neighbour lattice edges, w = 2, mu = 1. Throws BadParam for radius < 1.
WeightedGraph lattice_ball(int radius);

/// Identifier of lattice point (i, j) in lattice_ball.
std::string lattice_id(int i, int j);

/// Indices of the lattice points with max(|i|, |j|) = radius in g, ascending.
/// Throws UnknownVertex if g lacks one of them.
std::vector<std::size_t> lattice_ring(const WeightedGraph& g, int radius);

/// name in {"grid3x3", "lattice_ball"}; radius only used by lattice_ball.
WeightedGraph generate_builtin(std::string_view name, int radius = 6);

}  // namespace graphvar
