#include "graphvar/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <ostream>
#include <sstream>

#include "graphvar/fixtures.hpp"
#include "graphvar/io.hpp"

namespace graphvar::cli {
namespace {

using io::json;

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Collects what a run read and wrote; written once the command finishes.
struct Manifest {
    std::string command;
    std::vector<std::string> args;
    json inputs = json::array();
    json outputs = json::array();
    json config = json::object();
    std::uint64_t seed = 0;
    std::string path;

    void input_file(const std::string& p, const std::string& bytes) {
        inputs.push_back({{"path", p}, {"sha256", io::sha256_hex(bytes)}});
    }
    void input_reproduce(const std::string& name, const json& problem) {
        inputs.push_back({{"reproduce", name}, {"sha256", io::sha256_hex(io::dump(problem))}});
    }

    void write() const {
        if (path.empty()) return;
        json j = {{"command", command}, {"args", args},       {"inputs", inputs},  {"config", config},
                  {"outputs", outputs}, {"tool_version", kToolVersion}, {"seed", seed}, {"created_utc", utc_now()}};
        io::write_file(path, io::dump(j));
    }
};

struct ProblemSource {
    std::string path;
    std::string reproduce;
    double r1 = std::nan(""), r2 = std::nan(""), r = std::nan("");
    std::string write_problem;

    void add_to(CLI::App* app) {
        app->add_option("problem", path, "problem JSON file");
        app->add_option("--reproduce", reproduce, "built-in example: example-6.1 or example-6.2");
        app->add_option("--r1", r1, "example-6.1 exponent r1 in (1,2]");
        app->add_option("--r2", r2, "example-6.1 exponent r2 in (1,3]");
        app->add_option("--r", r, "example-6.2 exponent r in (3,5]");
        app->add_option("--write-problem", write_problem, "write the resolved problem JSON here");
    }

    io::ProblemFile load(Manifest& m) const {
        if (path.empty() == reproduce.empty()) fail(ErrorCode::BadParam, "give either a problem file or --reproduce");
        io::ProblemFile pf;
        if (!reproduce.empty()) {
            if (reproduce == "example-6.1") {
                pf = fixtures::example_6_1(std::isnan(r1) ? 2.0 : r1, std::isnan(r2) ? 3.0 : r2);
            } else if (reproduce == "example-6.2") {
                pf = fixtures::example_6_2(std::isnan(r) ? 5.0 : r);
            } else {
                pf = fixtures::reproduce(reproduce);
            }
            m.input_reproduce(reproduce, pf.source);
        } else {
            const std::string bytes = io::read_file(path);
            m.input_file(path, bytes);
            pf = io::problem_from_json(io::parse_json(bytes, path));
        }
        if (!write_problem.empty()) {
            io::write_file(write_problem, io::dump(pf.source));
            m.outputs.push_back(write_problem);
        }
        return pf;
    }
};

struct SolverFlags {
    std::optional<std::uint64_t> seed;
    std::optional<int> starts, max_iters, attempts, threads;
    std::optional<double> grad_tol, distinct_tol, power, shift;

    void add_to(CLI::App* app) {
        app->add_option("--seed", seed, "random seed");
        app->add_option("--starts", starts, "multistart count");
        app->add_option("--max-iters", max_iters, "iteration cap per local solve");
        app->add_option("--grad-tol", grad_tol, "residual tolerance");
        app->add_option("--distinct-tol", distinct_tol, "distinctness tolerance (W-norm)");
        app->add_option("--deflation-power", power, "deflation exponent");
        app->add_option("--deflation-shift", shift, "deflation shift");
        app->add_option("--deflation-attempts", attempts, "deflated Newton runs after the multistart phase");
        app->add_option("--threads", threads, "worker threads (0 = all)");
    }

    SolverConfig apply(SolverConfig c) const {
        if (seed) c.seed = *seed;
        if (starts) c.starts = *starts;
        if (max_iters) c.max_iters = *max_iters;
        if (attempts) c.deflation_attempts = *attempts;
        if (threads) c.threads = *threads;
        if (grad_tol) c.grad_tol = *grad_tol;
        if (distinct_tol) c.distinct_tol = *distinct_tol;
        if (power) c.deflation_power = *power;
        if (shift) c.deflation_shift = *shift;
        c.validate();
        return c;
    }
};

std::string manifest_path(const std::string& flag, const std::string& out) {
    if (!flag.empty()) return flag;
    if (!out.empty()) return out + ".manifest.json";
    return "graphvar_manifest.json";
}

void check_derivatives(const ProblemSpec& prob) {
    // Mandatory before solving; throws InconsistentDerivative.
    derivative_consistency(*prob.model, 1000, 1e-5);
}

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err, Manifest& m) {
    const std::string bytes = io::read_file(path);
    m.input_file(path, bytes);
    const io::json j = io::parse_json(bytes, path);
    if (j.is_object() && j.contains("builtin")) {
        const WeightedGraph g = io::graph_from_json(j);
        out << "valid: " << g.size() << " vertices, " << g.edges().size() << " edges\n";
        return Ok;
    }
    const GraphDescription d = io::graph_description_from_json(j);
    const auto violations = validate(d);
    if (violations.empty()) {
        out << "valid: " << d.vertices.size() << " vertices, " << d.edges.size() << " edges\n";
        return Ok;
    }
    for (const auto& v : violations) err << to_string(v.code) << ": " << v.message << "\n";
    return Validation;
}

struct OpFlags {
    std::string graph, function, function2, op, out;
    int m = 1, k = 1;
    double p = 2.0;
};

int cmd_op(const OpFlags& f, std::ostream& out, Manifest& m) {
    const std::string gbytes = io::read_file(f.graph);
    m.input_file(f.graph, gbytes);
    const WeightedGraph g = io::graph_from_json(io::parse_json(gbytes, f.graph));
    const std::string ubytes = io::read_file(f.function);
    m.input_file(f.function, ubytes);
    const VertexFunction u = io::function_from_json(g, io::parse_json(ubytes, f.function));
    auto second = [&] {
        if (f.function2.empty()) fail(ErrorCode::BadParam, "operation '" + f.op + "' needs --function2");
        const std::string vbytes = io::read_file(f.function2);
        m.input_file(f.function2, vbytes);
        return io::function_from_json(g, io::parse_json(vbytes, f.function2));
    };

    VertexFunction result;
    SingularityReport sr;
    if (f.op == "laplacian") result = laplacian(g, u);
    else if (f.op == "iterated_laplacian") result = iterated_laplacian(g, u, f.k);
    else if (f.op == "gamma") result = gamma(g, u, second());
    else if (f.op == "grad_norm") result = grad_norm(g, u);
    else if (f.op == "m_grad_norm") result = m_grad_norm(g, u, f.m);
    else if (f.op == "p_laplacian") result = p_laplacian(g, u, f.p, &sr);
    else if (f.op == "poly_laplacian") result = poly_lap_apply(g, u, f.m, f.p, &sr);
    else fail(ErrorCode::BadParam, "unknown operation '" + f.op + "'");

    io::json j = io::function_to_json(g, result);
    if (sr.regularized) j["regularized_vertices"] = sr.vertices;
    if (f.out.empty()) {
        out << io::dump(j);
    } else {
        io::write_file(f.out, io::dump(j));
        m.outputs.push_back(f.out);
    }
    m.config = {{"op", f.op}, {"m", f.m}, {"p", f.p}, {"k", f.k}};
    return Ok;
}

struct IntervalFlags {
    std::vector<double> gamma, delta;
    std::string mode, x0, out, strategy = "auto";
    std::optional<double> h0, mu0;
};

io::IntervalParams interval_params(const io::ProblemFile& pf, const IntervalFlags& f) {
    io::IntervalParams ip = pf.interval.value_or(io::IntervalParams{});
    if (!f.gamma.empty()) ip.gamma = f.gamma;
    if (!f.delta.empty()) ip.delta = f.delta;
    if (!f.mode.empty()) {
        if (f.mode == "finite") ip.mode = GraphMode::Finite;
        else if (f.mode == "locally_finite") ip.mode = GraphMode::LocallyFinite;
        else fail(ErrorCode::BadParam, "--mode must be finite or locally_finite");
    }
    if (ip.mode == GraphMode::LocallyFinite) {
        LocalFloors fl = ip.floors.value_or(LocalFloors{});
        if (!f.x0.empty()) fl.x0 = pf.problem.g().index(f.x0);
        if (f.h0) fl.h0 = *f.h0;
        if (f.mu0) fl.mu0 = *f.mu0;
        ip.floors = fl;
    }
    return ip;
}

int cmd_interval(const ProblemSource& src, const IntervalFlags& f, std::ostream& out, Manifest& m) {
    const io::ProblemFile pf = src.load(m);
    const io::IntervalParams ip = interval_params(pf, f);
    MaxOptions opt;
    if (f.strategy == "grid") opt.strategy = MaxStrategy::Grid;
    else if (f.strategy == "corner") opt.strategy = MaxStrategy::Corner;
    else if (f.strategy != "auto") fail(ErrorCode::BadParam, "--strategy must be auto, grid or corner");

    const IntervalReport r = io::compute_interval(pf.problem, ip, opt);
    const io::json j = io::report_to_json(r);
    if (!f.out.empty()) {
        io::write_file(f.out, io::dump(j));
        m.outputs.push_back(f.out);
    }
    m.config = {{"gamma", ip.gamma}, {"delta", ip.delta}, {"mode", ip.mode == GraphMode::Finite ? "finite" : "locally_finite"},
                {"strategy", f.strategy}};
    out << to_string(r.theorem) << " lambda_lo " << fmt("%.12g", r.lambda_lo) << " lambda_hi "
        << fmt("%.12g", r.lambda_hi) << " valid " << (r.valid ? "true" : "false") << "\n";
    for (const auto& h : r.hypotheses) {
        out << "  [" << (h.pass ? "pass" : "FAIL") << "] " << h.name << ": " << h.witness << "\n";
    }
    for (const auto& n : r.notes) out << "  note: " << n << "\n";
    return r.valid ? Ok : Hypotheses;
}

void print_summary(std::ostream& out, const SolutionSet& s) {
    out << "lambda " << fmt("%.12g", s.lambda) << ": " << s.points.size() << " distinct critical point(s) from "
        << s.candidates << " candidates\n";
    out << "   #          action      residual  kind          nontrivial\n";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        const auto& p = s.points[i];
        char line[160];
        std::snprintf(line, sizeof line, "%4zu  %14.8g  %12.3e  %-12s  %s\n", i, p.action_value, p.residual_sup,
                      std::string(to_string(p.kind)).c_str(), s.nontrivial_flags[i] ? "yes" : "no");
        out << line;
    }
    if (s.zero_excluded) out << "zero state is not a solution (F_s or F_t nonzero at the origin)\n";
}

int cmd_solve(const ProblemSource& src, double lambda, const SolverFlags& sf, bool expect_three,
              const std::string& out_path, std::ostream& out, Manifest& m) {
    const io::ProblemFile pf = src.load(m);
    const SolverConfig cfg = sf.apply(fixtures::solver_defaults(pf));
    m.config = io::config_to_json(cfg);
    m.config["lambda"] = lambda;
    m.seed = cfg.seed;
    if (!(lambda > 0.0)) fail(ErrorCode::BadParam, "--lambda must be > 0");
    check_derivatives(pf.problem);
    const SolutionSet s = find_three(pf.problem, lambda, cfg);
    if (!out_path.empty()) {
        io::write_file(out_path, io::dump(io::solution_to_json(pf.problem.g(), s)));
        m.outputs.push_back(out_path);
    }
    print_summary(out, s);
    if (expect_three && !s.found_three()) {
        out << "FoundFewer: " << s.points.size() << " < 3\n";
        return FewerThanThree;
    }
    return Ok;
}

int cmd_sweep(const ProblemSource& src, double lo, double hi, int steps, const SolverFlags& sf,
              const std::string& out_path, std::ostream& out, Manifest& m) {
    if (steps < 2) fail(ErrorCode::BadParam, "--steps must be >= 2");
    if (!(lo > 0.0) || !(lo < hi)) fail(ErrorCode::BadParam, "need 0 < lambda-min < lambda-max");
    const io::ProblemFile pf = src.load(m);
    const SolverConfig cfg = sf.apply(fixtures::solver_defaults(pf));
    m.config = io::config_to_json(cfg);
    m.config["lambda_min"] = lo;
    m.config["lambda_max"] = hi;
    m.config["steps"] = steps;
    m.seed = cfg.seed;
    check_derivatives(pf.problem);

    std::ostringstream csv;
    csv << "lambda,solutions_found,min_action,max_residual,status\n";
    for (int k = 0; k < steps; ++k) {
        const double lambda = lo + (hi - lo) * k / (steps - 1);
        csv << fmt("%.12g", lambda) << ",";
        try {
            const SolutionSet s = find_three(pf.problem, lambda, cfg);
            double min_action = std::nan(""), max_res = 0.0;
            for (const auto& p : s.points) {
                min_action = std::isnan(min_action) ? p.action_value : std::min(min_action, p.action_value);
                max_res = std::max(max_res, p.residual_sup);
            }
            csv << s.points.size() << "," << fmt("%.12g", min_action) << "," << fmt("%.6e", max_res) << ","
                << (s.found_three() ? "ok" : "fewer") << "\n";
        } catch (const Error& e) {
            csv << "0,,,error:" << to_string(e.code()) << "\n";
        }
    }
    if (out_path.empty()) {
        out << csv.str();
    } else {
        io::write_file(out_path, csv.str());
        m.outputs.push_back(out_path);
        out << "wrote " << steps << " rows to " << out_path << "\n";
    }
    return Ok;
}

}  // namespace

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::IoError: return Io;
        case ErrorCode::HypothesisFailed: return Hypotheses;
        case ErrorCode::FoundFewer: return FewerThanThree;
        default: return Validation;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Variational calculus on weighted graphs: operators, admissible intervals, critical points"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", kToolVersion);
    std::string manifest_flag;
    app.add_option("--manifest", manifest_flag, "where to write the run manifest");

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "check a graph file");
    validate_cmd->add_option("graph", validate_path, "graph JSON file")->required();

    OpFlags op;
    auto* op_cmd = app.add_subcommand("op", "apply a graph operator to a vertex function");
    op_cmd->add_option("--graph", op.graph, "graph JSON file")->required();
    op_cmd->add_option("--function", op.function, "vertex-function JSON file")->required();
    op_cmd->add_option("--function2", op.function2, "second function (gamma)");
    op_cmd->add_option("--op", op.op,
                       "laplacian | iterated_laplacian | gamma | grad_norm | m_grad_norm | p_laplacian | "
                       "poly_laplacian")
        ->required();
    op_cmd->add_option("--m", op.m, "order m");
    op_cmd->add_option("--p", op.p, "exponent p");
    op_cmd->add_option("--k", op.k, "power of the Laplacian");
    op_cmd->add_option("--out", op.out, "output file (default: standard output)");

    ProblemSource interval_src;
    IntervalFlags iv;
    auto* interval_cmd = app.add_subcommand("interval", "admissible lambda interval and hypothesis report");
    interval_src.add_to(interval_cmd);
    interval_cmd->add_option("--gamma", iv.gamma, "gamma constant(s)")->delimiter(',');
    interval_cmd->add_option("--delta", iv.delta, "delta constant(s)")->delimiter(',');
    interval_cmd->add_option("--mode", iv.mode, "finite | locally_finite");
    interval_cmd->add_option("--x0", iv.x0, "base vertex (locally finite mode)");
    interval_cmd->add_option("--h0", iv.h0, "potential floor");
    interval_cmd->add_option("--mu0", iv.mu0, "measure floor");
    interval_cmd->add_option("--strategy", iv.strategy, "box maximum: auto | grid | corner");
    interval_cmd->add_option("--out", iv.out, "report JSON");

    ProblemSource solve_src;
    SolverFlags solve_flags;
    double lambda = 0.0;
    bool expect_three = false;
    std::string solve_out;
    auto* solve_cmd = app.add_subcommand("solve", "find distinct critical points at one lambda");
    solve_src.add_to(solve_cmd);
    solve_flags.add_to(solve_cmd);
    solve_cmd->add_option("--lambda", lambda, "parameter lambda")->required();
    solve_cmd->add_flag("--expect-three", expect_three, "exit 4 unless three distinct points are found");
    solve_cmd->add_option("--out", solve_out, "solution-set JSON");

    ProblemSource sweep_src;
    SolverFlags sweep_flags;
    double lambda_min = 0.0, lambda_max = 0.0;
    int steps = 0;
    std::string sweep_out;
    auto* sweep_cmd = app.add_subcommand("sweep", "solution counts over a range of lambda (CSV)");
    sweep_src.add_to(sweep_cmd);
    sweep_flags.add_to(sweep_cmd);
    sweep_cmd->add_option("--lambda-min", lambda_min, "first lambda")->required();
    sweep_cmd->add_option("--lambda-max", lambda_max, "last lambda")->required();
    sweep_cmd->add_option("--steps", steps, "number of lambda values")->required();
    sweep_cmd->add_option("--out", sweep_out, "CSV file (default: standard output)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Ok : Validation;
    }

    Manifest m;
    m.args = args;
    try {
        int status = Ok;
        if (validate_cmd->parsed()) {
            m.command = "validate";
            m.path = manifest_path(manifest_flag, "");
            status = cmd_validate(validate_path, out, err, m);
        } else if (op_cmd->parsed()) {
            m.command = "op";
            m.path = manifest_path(manifest_flag, op.out);
            status = cmd_op(op, out, m);
        } else if (interval_cmd->parsed()) {
            m.command = "interval";
            m.path = manifest_path(manifest_flag, iv.out);
            status = cmd_interval(interval_src, iv, out, m);
        } else if (solve_cmd->parsed()) {
            m.command = "solve";
            m.path = manifest_path(manifest_flag, solve_out);
            status = cmd_solve(solve_src, lambda, solve_flags, expect_three, solve_out, out, m);
        } else if (sweep_cmd->parsed()) {
            m.command = "sweep";
            m.path = manifest_path(manifest_flag, sweep_out);
            status = cmd_sweep(sweep_src, lambda_min, lambda_max, steps, sweep_flags, sweep_out, out, m);
        }
        m.write();
        return status;
    } catch (const Error& e) {
        err << e.what() << "\n";
        try {
            m.write();
        } catch (const Error&) {
        }
        return exit_code_for(e.code());
    }
}

}  // namespace graphvar::cli
