#pragma once

// JSON readers and writers for every file the CLI consumes or produces.
// Readers throw ParseError for malformed documents and IoError for
// unreadable paths.

#include <json.hpp>

#include <optional>
#include <string>

#include "graphvar/intervals.hpp"
#include "graphvar/solver.hpp"

namespace graphvar::io {

using nlohmann::json;

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
json parse_json(const std::string& text, const std::string& what);

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(const std::string& bytes);

// Graphs: { "vertices": [{"id", "mu"}], "edges": [{"a", "b", "w"}] }.
// A problem file may also say { "builtin": "grid3x3" } or
// { "builtin": "lattice_ball", "radius": R }.
GraphDescription graph_description_from_json(const json& j);
json graph_to_json(const WeightedGraph& g);
WeightedGraph graph_from_json(const json& j);

// Vertex functions: { "values": { id: number } }, every vertex present.
VertexFunction function_from_json(const WeightedGraph& g, const json& j);
json function_to_json(const WeightedGraph& g, const VertexFunction& f);

// Nonlinearities: { "builtin": "example_6_1", "params": {omega1, omega2, r1, r2} },
// { "builtin": "example_6_2", "params": {omega, r, x0} } or
// { "table": { "s": [...], "t": [...], "F": [[...]], "Fs"?: [[...]], "Ft"?: [[...]] } }.
NonlinearityModel nonlinearity_from_json(const WeightedGraph& g, const json& j);

struct IntervalParams {
    GraphMode mode = GraphMode::Finite;
    std::vector<double> gamma;  // one entry per equation
    std::vector<double> delta;
    std::optional<LocalFloors> floors;
};

/// Dispatches to the interval routine matching the problem shape and mode.
IntervalReport compute_interval(const ProblemSpec& prob, const IntervalParams& params,
                                const MaxOptions& options = {});

struct ProblemFile {
    ProblemSpec problem;
    std::optional<IntervalParams> interval;
    /// Solver start radii (u, v) when the file supplies them.
    std::optional<std::pair<double, double>> start_radius;
    /// Canonical JSON the problem was built from.
    json source;
};

/// Problem document:
/// { "graph": <graph or builtin>, "m1", "m2", "p", "q",
///   "h1", "h2": number or vertex-function document, "scalar": bool,
///   "nonlinearity": {...},
///   "interval"?: { "mode": "finite"|"locally_finite", "gamma": [..], "delta": [..],
///                  "x0"?, "h0"?, "mu0"? },
///   "start_radius"?: [ru, rv],
///   "truncation"?: "none" | "dirichlet", "boundary"?: [vertex ids] }
/// "dirichlet" needs the lattice_ball builtin of radius R; the problem then
/// lives on lattice_ball(R + 1) with the ring of radius R + 1 held at zero.
/// "boundary" holds the listed vertices at zero on any graph.
ProblemFile problem_from_json(const json& j);

json report_to_json(const IntervalReport& r);
IntervalReport report_from_json(const json& j);

json solution_to_json(const WeightedGraph& g, const SolutionSet& s);
SolutionSet solution_from_json(const WeightedGraph& g, const json& j);

json config_to_json(const SolverConfig& c);

/// Serialises with two-space indentation and a trailing newline.
std::string dump(const json& j);

}  // namespace graphvar::io
