#include "graphvar/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace graphvar::io {
namespace {

[[noreturn]] void parse_fail(const std::string& msg) { fail(ErrorCode::ParseError, msg); }

const json& field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) parse_fail(where + ": missing field '" + key + "'");
    return j.at(key);
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) parse_fail(where + ": expected a number");
    return j.get<double>();
}

double number(const json& j, const char* key, const std::string& where) {
    return number(field(j, key, where), where + "." + key);
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
    return j.contains(key) ? number(j.at(key), where + "." + key) : fallback;
}

std::string text(const json& j, const char* key, const std::string& where) {
    const json& v = field(j, key, where);
    if (!v.is_string()) parse_fail(where + "." + key + ": expected a string");
    return v.get<std::string>();
}

int integer(const json& j, const char* key, int fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer()) parse_fail(where + "." + key + ": expected an integer");
    return v.get<int>();
}

// Report fields: null stands for an undefined (infinite) endpoint.
double number_or_inf(const json& j, const char* key, const std::string& where) {
    const json& v = field(j, key, where);
    return v.is_null() ? std::numeric_limits<double>::infinity() : number(v, where + "." + key);
}

std::vector<double> numbers(const json& j, const std::string& where) {
    if (!j.is_array()) parse_fail(where + ": expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<std::vector<double>> matrix(const json& j, const std::string& where) {
    if (!j.is_array()) parse_fail(where + ": expected an array of rows");
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(numbers(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

// Non-finite values are written as null (JSON has no infinity).
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json rounded(double v) { return finite_or_null(report_round(v)); }

json rounded(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(rounded(x));
    return a;
}

VertexFunction coefficient(const WeightedGraph& g, const json& j, const std::string& where) {
    if (j.is_number()) return VertexFunction::constant(g.size(), j.get<double>());
    if (!j.is_object()) parse_fail(where + ": expected a number or a vertex-function document");
    return function_from_json(g, j);
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) fail(ErrorCode::IoError, "error while reading '" + path + "'");
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
    out << content;
    if (!out) fail(ErrorCode::IoError, "error while writing '" + path + "'");
}

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        parse_fail(what + ": " + e.what());
    }
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        fail(ErrorCode::IoError, "SHA-256 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

GraphDescription graph_description_from_json(const json& j) {
    GraphDescription d;
    const json& vs = field(j, "vertices", "graph");
    const json& es = field(j, "edges", "graph");
    if (!vs.is_array() || !es.is_array()) parse_fail("graph: vertices and edges must be arrays");
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const std::string where = "graph.vertices[" + std::to_string(i) + "]";
        d.vertices.push_back({text(vs[i], "id", where), number(vs[i], "mu", where)});
    }
    for (std::size_t i = 0; i < es.size(); ++i) {
        const std::string where = "graph.edges[" + std::to_string(i) + "]";
        d.edges.push_back({text(es[i], "a", where), text(es[i], "b", where), number(es[i], "w", where)});
    }
    return d;
}

WeightedGraph graph_from_json(const json& j) {
    if (j.is_object() && j.contains("builtin")) {
        return generate_builtin(text(j, "builtin", "graph"), integer(j, "radius", 6, "graph"));
    }
    return build_graph(graph_description_from_json(j));
}

json graph_to_json(const WeightedGraph& g) {
    const GraphDescription d = g.describe();
    json j;
    j["vertices"] = json::array();
    for (const auto& v : d.vertices) j["vertices"].push_back({{"id", v.id}, {"mu", v.mu}});
    j["edges"] = json::array();
    for (const auto& e : d.edges) j["edges"].push_back({{"a", e.a}, {"b", e.b}, {"w", e.w}});
    return j;
}

VertexFunction function_from_json(const WeightedGraph& g, const json& j) {
    const json& values = field(j, "values", "function");
    if (!values.is_object()) parse_fail("function.values must be an object keyed by vertex id");
    std::vector<double> out(g.size(), 0.0);
    std::vector<bool> seen(g.size(), false);
    for (auto it = values.begin(); it != values.end(); ++it) {
        const auto x = g.find(it.key());
        if (!x) fail(ErrorCode::UnknownVertex, "function names unknown vertex '" + it.key() + "'");
        out[*x] = number(it.value(), "function.values." + it.key());
        seen[*x] = true;
    }
    for (std::size_t x = 0; x < g.size(); ++x) {
        if (!seen[x]) fail(ErrorCode::DomainMismatch, "function has no value for vertex '" + g.id(x) + "'");
    }
    return VertexFunction(std::move(out));
}

json function_to_json(const WeightedGraph& g, const VertexFunction& f) {
    require_domain(g, f, "function");
    json values = json::object();
    for (std::size_t x = 0; x < g.size(); ++x) values[g.id(x)] = f[x];
    return {{"values", values}};
}

NonlinearityModel nonlinearity_from_json(const WeightedGraph& g, const json& j) {
    if (j.is_object() && j.contains("table")) {
        const json& t = j.at("table");
        TabulatedNonlinearity table;
        table.s = numbers(field(t, "s", "table"), "table.s");
        table.t = numbers(field(t, "t", "table"), "table.t");
        table.F = matrix(field(t, "F", "table"), "table.F");
        if (t.contains("Fs")) table.Fs = matrix(t.at("Fs"), "table.Fs");
        if (t.contains("Ft")) table.Ft = matrix(t.at("Ft"), "table.Ft");
        NonlinearityModel model = tabulated(std::move(table));
        model.set_descriptor(j.dump());
        return model;
    }
    const std::string name = text(j, "builtin", "nonlinearity");
    const json params = j.value("params", json::object());
    if (name == "example_6_1") {
        return example_6_1(number(params, "omega1", "params"), number(params, "omega2", "params"),
                           number_or(params, "r1", 2.0, "params"), number_or(params, "r2", 3.0, "params"));
    }
    if (name == "example_6_2") {
        return example_6_2(g, g.index(text(params, "x0", "params")), number(params, "omega", "params"),
                           number_or(params, "r", 5.0, "params"));
    }
    parse_fail("unknown builtin nonlinearity '" + name + "'");
}

IntervalReport compute_interval(const ProblemSpec& prob, const IntervalParams& params, const MaxOptions& options) {
    const std::size_t need = prob.scalar ? 1 : 2;
    if (params.gamma.size() != need || params.delta.size() != need) {
        fail(ErrorCode::BadParam, "interval needs " + std::to_string(need) + " gamma and delta values");
    }
    if (prob.scalar) return interval_scalar(prob, params.gamma[0], params.delta[0], params.mode, params.floors, options);
    const SystemConstants c{params.gamma[0], params.gamma[1], params.delta[0], params.delta[1]};
    if (params.mode == GraphMode::Finite) return interval_finite(prob, c, options);
    if (!params.floors) fail(ErrorCode::BadParam, "locally finite mode needs x0, h0 and mu0");
    return interval_locally_finite(prob, c, *params.floors, options);
}

ProblemFile problem_from_json(const json& j) {
    if (!j.is_object()) parse_fail("problem must be a JSON object");
    ProblemFile pf;
    ProblemSpec& p = pf.problem;
    const json& gj = field(j, "graph", "problem");
    const std::string truncation = j.value("truncation", std::string("none"));
    std::shared_ptr<const WeightedGraph> graph;
    if (truncation == "dirichlet") {
        if (!gj.is_object() || gj.value("builtin", std::string()) != "lattice_ball") {
            parse_fail("problem.truncation 'dirichlet' needs the lattice_ball builtin graph");
        }
        const int radius = integer(gj, "radius", 6, "graph");
        if (radius < 1) fail(ErrorCode::BadParam, "lattice_ball radius must be >= 1, got " + std::to_string(radius));
        graph = std::make_shared<const WeightedGraph>(lattice_ball(radius + 1));
        p.boundary = lattice_ring(*graph, radius + 1);
    } else if (truncation == "none") {
        graph = std::make_shared<const WeightedGraph>(graph_from_json(gj));
    } else {
        parse_fail("problem.truncation must be 'none' or 'dirichlet'");
    }
    if (j.contains("boundary")) {
        const json& b = j.at("boundary");
        if (!b.is_array()) parse_fail("problem.boundary must be an array of vertex ids");
        for (const auto& id : b) {
            if (!id.is_string()) parse_fail("problem.boundary must be an array of vertex ids");
            p.boundary.push_back(graph->index(id.get<std::string>()));
        }
        std::sort(p.boundary.begin(), p.boundary.end());
        p.boundary.erase(std::unique(p.boundary.begin(), p.boundary.end()), p.boundary.end());
    }
    p.graph = graph;
    p.scalar = j.value("scalar", false);
    p.m1 = integer(j, "m1", 1, "problem");
    p.m2 = integer(j, "m2", 1, "problem");
    p.p = number(j, "p", "problem");
    p.q = p.scalar ? p.p : number(j, "q", "problem");
    p.h1 = coefficient(*graph, field(j, "h1", "problem"), "problem.h1");
    if (!p.scalar) p.h2 = coefficient(*graph, field(j, "h2", "problem"), "problem.h2");
    p.model = std::make_shared<const NonlinearityModel>(
        nonlinearity_from_json(*graph, field(j, "nonlinearity", "problem")));

    if (j.contains("interval")) {
        const json& iv = j.at("interval");
        IntervalParams ip;
        const std::string mode = iv.value("mode", std::string("finite"));
        if (mode == "finite") ip.mode = GraphMode::Finite;
        else if (mode == "locally_finite") ip.mode = GraphMode::LocallyFinite;
        else parse_fail("interval.mode must be 'finite' or 'locally_finite'");
        ip.gamma = numbers(field(iv, "gamma", "interval"), "interval.gamma");
        ip.delta = numbers(field(iv, "delta", "interval"), "interval.delta");
        if (ip.mode == GraphMode::LocallyFinite) {
            ip.floors = LocalFloors{graph->index(text(iv, "x0", "interval")), number(iv, "h0", "interval"),
                                    number(iv, "mu0", "interval")};
        }
        pf.interval = ip;
    }
    if (j.contains("start_radius")) {
        const auto r = numbers(j.at("start_radius"), "problem.start_radius");
        if (r.empty() || r.size() > 2) parse_fail("problem.start_radius needs one or two values");
        pf.start_radius = std::pair{r[0], r.size() > 1 ? r[1] : r[0]};
    }
    p.validate();
    pf.source = j;
    return pf;
}

json report_to_json(const IntervalReport& r) {
    json j;
    j["theorem"] = std::string(to_string(r.theorem));
    j["kappa"] = rounded(r.kappa);
    j["box"] = rounded(r.box);
    j["lambda_lo"] = rounded(r.lambda_lo);
    j["lambda_hi"] = rounded(r.lambda_hi);
    j["hypotheses"] = json::array();
    for (const auto& h : r.hypotheses) j["hypotheses"].push_back({{"name", h.name}, {"pass", h.pass}, {"witness", h.witness}});
    j["valid"] = r.valid;
    j["box_max"] = rounded(r.box_max);
    j["f_at_delta"] = rounded(r.f_at_delta);
    j["phi_at_delta"] = rounded(r.phi_at_delta);
    j["gamma_level"] = rounded(r.gamma_level);
    if (r.local_mass) j["local_mass"] = rounded(*r.local_mass);
    j["nontrivial_certified"] = r.nontrivial_certified;
    j["notes"] = r.notes;
    return j;
}

IntervalReport report_from_json(const json& j) {
    IntervalReport r;
    r.theorem = theorem_from_string(text(j, "theorem", "report"));
    r.kappa = numbers(field(j, "kappa", "report"), "report.kappa");
    r.box = numbers(field(j, "box", "report"), "report.box");
    r.lambda_lo = number_or_inf(j, "lambda_lo", "report");
    r.lambda_hi = number_or_inf(j, "lambda_hi", "report");
    const json& hs = field(j, "hypotheses", "report");
    if (!hs.is_array()) parse_fail("report.hypotheses must be an array");
    for (const auto& h : hs) {
        r.hypotheses.push_back({text(h, "name", "hypothesis"), field(h, "pass", "hypothesis").get<bool>(),
                                text(h, "witness", "hypothesis")});
    }
    r.valid = field(j, "valid", "report").get<bool>();
    r.box_max = number_or(j, "box_max", 0.0, "report");
    r.f_at_delta = number_or(j, "f_at_delta", 0.0, "report");
    r.phi_at_delta = number_or(j, "phi_at_delta", 0.0, "report");
    r.gamma_level = number_or(j, "gamma_level", 0.0, "report");
    if (j.contains("local_mass")) r.local_mass = numbers(j.at("local_mass"), "report.local_mass");
    r.nontrivial_certified = j.value("nontrivial_certified", false);
    if (j.contains("notes")) r.notes = j.at("notes").get<std::vector<std::string>>();
    return r;
}

json solution_to_json(const WeightedGraph& g, const SolutionSet& s) {
    json j;
    j["lambda"] = s.lambda;
    j["points"] = json::array();
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        const auto& p = s.points[i];
        json pj;
        pj["u"] = function_to_json(g, p.state.u)["values"];
        pj["v"] = p.state.v.empty() ? json::object() : function_to_json(g, p.state.v)["values"];
        pj["action"] = finite_or_null(p.action_value);
        pj["residual"] = finite_or_null(p.residual_sup);
        pj["kind"] = std::string(to_string(p.kind));
        pj["iterations"] = p.iterations;
        pj["nontrivial"] = i < s.nontrivial_flags.size() && s.nontrivial_flags[i];
        j["points"].push_back(pj);
    }
    j["distances"] = s.pairwise_distances;
    j["zero_excluded"] = s.zero_excluded;
    j["candidates"] = s.candidates;
    return j;
}

SolutionSet solution_from_json(const WeightedGraph& g, const json& j) {
    SolutionSet s;
    s.lambda = number(j, "lambda", "solution");
    const json& pts = field(j, "points", "solution");
    if (!pts.is_array()) parse_fail("solution.points must be an array");
    for (const auto& pj : pts) {
        CriticalPoint p;
        p.state.u = function_from_json(g, {{"values", field(pj, "u", "point")}});
        const json& v = field(pj, "v", "point");
        if (!v.empty()) p.state.v = function_from_json(g, {{"values", v}});
        p.action_value = number(pj, "action", "point");
        p.residual_sup = number(pj, "residual", "point");
        p.kind = point_kind_from_string(text(pj, "kind", "point"));
        p.iterations = integer(pj, "iterations", 0, "point");
        p.status = SolveStatus::Converged;
        s.nontrivial_flags.push_back(pj.value("nontrivial", false));
        s.points.push_back(std::move(p));
    }
    s.pairwise_distances = matrix(field(j, "distances", "solution"), "solution.distances");
    s.zero_excluded = j.value("zero_excluded", false);
    s.candidates = integer(j, "candidates", 0, "solution");
    return s;
}

json config_to_json(const SolverConfig& c) {
    return {{"starts", c.starts},
            {"max_iters", c.max_iters},
            {"grad_tol", c.grad_tol},
            {"distinct_tol", c.distinct_tol},
            {"seed", c.seed},
            {"deflation_power", c.deflation_power},
            {"deflation_shift", c.deflation_shift},
            {"deflation_attempts", c.deflation_attempts},
            {"start_radius", {c.start_radius_u, c.start_radius_v}}};
}

}  // namespace graphvar::io
