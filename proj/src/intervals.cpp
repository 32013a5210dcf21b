#include "graphvar/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "graphvar/rng.hpp"

namespace graphvar {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kHypothesisSamples = 10000;

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double rel_change(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

std::vector<std::size_t> all_vertices(const NonlinearityModel& model, std::size_t n) {
    if (model.traits().vertex_independent) return {0};
    std::vector<std::size_t> xs(n);
    for (std::size_t x = 0; x < n; ++x) xs[x] = x;
    return xs;
}

// Golden-section search for a maximum of f on [lo, hi].
template <typename Fn>
std::pair<double, double> golden_max(Fn f, double lo, double hi, int iters = 60) {
    constexpr double r = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    for (int k = 0; k < iters && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++k) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

double axis(double extent, int points, int i) { return -extent + 2.0 * extent * i / (points - 1); }

// t_only_zero: evaluate at t = 0 only (t-independent models and scalar reductions).
double grid_max_F(const NonlinearityModel& model, std::size_t n, double S, double T, int points, bool t_only_zero) {
    const bool t_free = t_only_zero;
    const int tp = t_free ? 1 : points;
    double best = -kInf;
    for (std::size_t x : all_vertices(model, n)) {
        int bi = 0, bj = 0;
        double bx = -kInf;
        for (int i = 0; i < points; ++i) {
            const double s = axis(S, points, i);
            for (int j = 0; j < tp; ++j) {
                const double t = t_free ? 0.0 : axis(T, points, j);
                const double v = model.F(x, s, t);
                if (v > bx) {
                    bx = v;
                    bi = i;
                    bj = j;
                }
            }
        }
        // Alternate 1-D refinements inside the neighbouring cells of the best node.
        double s = axis(S, points, bi);
        double t = t_free ? 0.0 : axis(T, points, bj);
        const double hs = 2.0 * S / (points - 1), ht = 2.0 * T / (points - 1);
        for (int round = 0; round < 3; ++round) {
            auto [s_new, fs] = golden_max([&](double a) { return model.F(x, a, t); }, std::max(-S, s - hs),
                                          std::min(S, s + hs));
            if (fs > bx) {
                bx = fs;
                s = s_new;
            }
            if (t_free) break;
            auto [t_new, ft] = golden_max([&](double b) { return model.F(x, s, b); }, std::max(-T, t - ht),
                                          std::min(T, t + ht));
            if (ft > bx) {
                bx = ft;
                t = t_new;
            }
        }
        best = std::max(best, bx);
    }
    return best;
}

double corner_max_F(const NonlinearityModel& model, std::size_t n, double S, double T, bool t_only_zero) {
    const bool t_free = t_only_zero;
    double best = -kInf;
    for (std::size_t x : all_vertices(model, n)) {
        for (double s : {-S, 0.0, S}) {
            if (t_free) {
                best = std::max(best, model.F(x, s, 0.0));
                continue;
            }
            for (double t : {-T, 0.0, T}) best = std::max(best, model.F(x, s, t));
        }
    }
    return best;
}

bool use_corner(const NonlinearityModel& model, const MaxOptions& o) {
    return o.strategy == MaxStrategy::Corner || (o.strategy == MaxStrategy::Auto && model.traits().corner_maximal);
}

double grid_max_envelope(const Envelope& env, double R, int points) {
    int bi = 0;
    double best = -kInf;
    for (int i = 0; i < points; ++i) {
        const double v = env.a(R * i / (points - 1));
        if (v > best) {
            best = v;
            bi = i;
        }
    }
    const double h = R / (points - 1);
    const double r = R * bi / (points - 1);
    auto [r_new, v] = golden_max([&](double a) { return env.a(a); }, std::max(0.0, r - h), std::min(R, r + h));
    (void)r_new;
    return std::max(best, v);
}

// ---- hypothesis checks shared by all four theorems --------------------------

HypothesisCheck check_c1(const NonlinearityModel& model) {
    DerivativeCheckOptions o;
    o.report_only = true;
    const DerivativeReport r = derivative_consistency(model, 1000, 1e-5, o);
    return {"nonlinearity_c1", r.passed,
            "max finite-difference discrepancy " + num(r.max_discrepancy) + " over " +
                std::to_string(r.samples_checked) + " samples (sampled, heuristic)"};
}

HypothesisCheck check_zero_at_origin(const ProblemSpec& prob) {
    const auto& g = prob.g();
    std::vector<double> f0(g.size());
    for (std::size_t x = 0; x < g.size(); ++x) f0[x] = prob.model->F(x, 0.0, 0.0);
    const double i0 = kernels::active().weighted_sum(g.mu(), f0);
    return {"zero_at_origin", i0 == 0.0, "int F(x,0,0) dmu = " + num(i0)};
}

HypothesisCheck check_growth(const ProblemSpec& prob) {
    const auto& model = *prob.model;
    const auto& growth = model.growth();
    if (!growth) return {"subcritical_growth", false, "model supplies no growth bound"};
    std::string witness;
    bool pass = true;
    if (!(growth->alpha >= 0.0 && growth->alpha < prob.p)) {
        pass = false;
        witness += "alpha = " + num(growth->alpha) + " is not in [0, p = " + num(prob.p) + "); ";
    }
    if (!prob.scalar && !(growth->beta >= 0.0 && growth->beta < prob.q)) {
        pass = false;
        witness += "beta = " + num(growth->beta) + " is not in [0, q = " + num(prob.q) + "); ";
    }
    const auto& hints = model.sample_hints();
    CounterRng rng(0x67726f77ULL, 0);
    double worst = -kInf;
    for (std::size_t k = 0; k < kHypothesisSamples; ++k) {
        const std::size_t x = hints.vertices[rng.below(hints.vertices.size())];
        const double s = rng.uniform(-hints.s_extent, hints.s_extent);
        const double t = prob.scalar ? 0.0 : rng.uniform(-hints.t_extent, hints.t_extent);
        const double bound = growth->f1.at(x) * std::pow(std::abs(s), growth->alpha) +
                             growth->f2.at(x) * std::pow(std::abs(t), growth->beta) + growth->g.at(x);
        const double f = model.F(x, s, t);
        worst = std::max(worst, (f - bound) / std::max(1.0, std::abs(bound)));
    }
    const bool sampled_ok = worst <= 1e-12;
    if (!sampled_ok) {
        pass = false;
        witness += "sampled bound exceeded, worst relative excess " + num(worst) + "; ";
    }
    witness += "sampled bound " + std::string(sampled_ok ? "holds" : "fails") + " on " +
               std::to_string(kHypothesisSamples) + " points (heuristic)";
    return {"subcritical_growth", pass, witness};
}

HypothesisCheck check_envelope(const ProblemSpec& prob) {
    const auto& model = *prob.model;
    const Envelope& env = *model.envelope();
    const auto& hints = model.sample_hints();
    bool b_nonneg = true;
    for (std::size_t x = 0; x < prob.g().size(); ++x) b_nonneg = b_nonneg && env.b.at(x) >= 0.0;
    CounterRng rng(0x656e76ULL, 0);
    double worst = -kInf, worst_s = 0.0, worst_t = 0.0;
    for (std::size_t k = 0; k < kHypothesisSamples; ++k) {
        const std::size_t x = hints.vertices[rng.below(hints.vertices.size())];
        const double s = rng.uniform(-hints.s_extent, hints.s_extent);
        const double t = prob.scalar ? 0.0 : rng.uniform(-hints.t_extent, hints.t_extent);
        const double bound = env.a(std::hypot(s, t)) * env.b.at(x);
        const double m = std::max({std::abs(model.F(x, s, t)), std::abs(model.Fs(x, s, t)),
                                   prob.scalar ? 0.0 : std::abs(model.Ft(x, s, t))});
        const double excess = (m - bound) / std::max(1.0, bound);
        if (excess > worst) {
            worst = excess;
            worst_s = s;
            worst_t = t;
        }
    }
    const bool pass = b_nonneg && worst <= 1e-12;
    std::string witness = b_nonneg ? "" : "b takes negative values; ";
    witness += pass ? "max(|F|,|F_s|,|F_t|) <= a b on " + std::to_string(kHypothesisSamples) +
                          " sampled points (heuristic)"
                    : "bound exceeded, worst relative excess " + num(worst) + " at (s, t) = (" + num(worst_s) +
                          ", " + num(worst_t) + ")";
    return {"envelope_bound", pass, witness};
}

HypothesisCheck check_delta(const std::vector<double>& gamma, const std::vector<double>& delta,
                            const std::vector<double>& kappa) {
    bool pass = true;
    std::string witness;
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        const double gk = gamma[i] * kappa[i];
        pass = pass && delta[i] > gk;
        witness += "delta" + std::to_string(i + 1) + " = " + num(delta[i]) + (delta[i] > gk ? " > " : " <= ") +
                   "gamma*kappa = " + num(gk) + "; ";
    }
    witness.resize(witness.size() - 2);
    return {"delta_exceeds_gamma_kappa", pass, witness};
}

HypothesisCheck check_nonempty(const IntervalReport& r) {
    const bool finite = std::isfinite(r.lambda_lo) && std::isfinite(r.lambda_hi);
    const bool pass = finite && r.f_at_delta > 0.0 && r.box_max > 0.0 && r.lambda_lo < r.lambda_hi;
    std::string witness;
    if (!(r.f_at_delta > 0.0)) witness = "F at the delta test state is " + num(r.f_at_delta) + " (lower end undefined)";
    else if (!(r.box_max > 0.0)) witness = "box maximum is " + num(r.box_max) + " (upper end undefined)";
    else witness = num(r.lambda_lo) + (pass ? " < " : " >= ") + num(r.lambda_hi);
    return {"interval_nonempty", pass, witness};
}

HypothesisCheck check_level(const IntervalReport& r) {
    return {"phi_delta_exceeds_level", r.phi_at_delta > r.gamma_level,
            "Phi(test state) = " + num(r.phi_at_delta) + ", level = " + num(r.gamma_level)};
}

HypothesisCheck check_refinement(double base, double fine, std::optional<double> corner) {
    double change = rel_change(base, fine);
    std::string witness = "grid 513 -> 1025 relative change " + num(change);
    bool pass = change < 1e-6;
    if (corner) {
        const double gap = (fine - *corner) / std::max(std::abs(fine), 1e-300);
        pass = pass && gap < 1e-6;
        witness += "; corner value " + num(*corner) + " vs fine grid " + num(fine);
    }
    return {"box_max_refinement", pass, witness};
}

HypothesisCheck check_floors(const ProblemSpec& prob, const LocalFloors& f) {
    const auto& g = prob.g();
    double hmin = min_value(prob.h1);
    if (!prob.scalar) hmin = std::min(hmin, min_value(prob.h2));
    const bool pass = f.h0 > 0.0 && f.mu0 > 0.0 && hmin >= f.h0 && g.mu_min() >= f.mu0;
    return {"measure_and_potential_floors", pass,
            "min h = " + num(hmin) + " vs h0 = " + num(f.h0) + ", min mu = " + num(g.mu_min()) + " vs mu0 = " +
                num(f.mu0)};
}

HypothesisCheck check_exponents(const ProblemSpec& prob, double floor) {
    const bool pass = prob.p >= floor && (prob.scalar || prob.q >= floor) && prob.p > 1.0 &&
                      (prob.scalar || prob.q > 1.0);
    std::string witness = "p = " + num(prob.p);
    if (!prob.scalar) witness += ", q = " + num(prob.q);
    witness += floor > 1.0 ? " (need >= " + num(floor) + ")" : " (need > 1)";
    return {"exponents", pass, witness};
}

HypothesisCheck check_first_order(const ProblemSpec& prob) {
    const bool pass = prob.m1 == 1 && (prob.scalar || prob.m2 == 1);
    return {"first_order_operators", pass,
            "m1 = " + std::to_string(prob.m1) + (prob.scalar ? "" : ", m2 = " + std::to_string(prob.m2))};
}

bool nontrivial(const ProblemSpec& prob) {
    for (std::size_t x = 0; x < prob.g().size(); ++x) {
        if (prob.model->Fs(x, 0.0, 0.0) != 0.0) return true;
        if (!prob.scalar && prob.model->Ft(x, 0.0, 0.0) != 0.0) return true;
    }
    return false;
}

void finish(IntervalReport& r) {
    r.hypotheses.push_back(check_nonempty(r));
    r.hypotheses.push_back(check_level(r));
    r.valid = std::all_of(r.hypotheses.begin(), r.hypotheses.end(), [](const auto& h) { return h.pass; });
}

double box_value(const NonlinearityModel& m, std::size_t n, double S, double T, bool scalar, const MaxOptions& o,
                 HypothesisCheck& refinement) {
    const bool t0 = scalar || m.traits().t_independent;
    const double base = grid_max_F(m, n, S, T, o.grid_points, t0);
    const double fine = grid_max_F(m, n, S, T, 2 * o.grid_points - 1, t0);
    std::optional<double> corner;
    if (use_corner(m, o)) corner = corner_max_F(m, n, S, T, t0);
    refinement = check_refinement(base, fine, corner);
    return corner ? *corner : base;
}

double envelope_value(const Envelope& env, double R, const MaxOptions& o, HypothesisCheck& refinement) {
    const double base = grid_max_envelope(env, R, o.grid_points);
    const double fine = grid_max_envelope(env, R, 2 * o.grid_points - 1);
    refinement = check_refinement(base, fine, std::nullopt);
    return base;
}

double inf_F_at(const ProblemSpec& prob, double d1, double d2) {
    double best = kInf;
    for (std::size_t x : all_vertices(*prob.model, prob.g().size())) best = std::min(best, prob.model->F(x, d1, d2));
    return best;
}

void require_positive_constants(std::initializer_list<double> values) {
    for (double v : values) {
        if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorCode::BadParam, "gamma and delta constants must be positive");
    }
}

}  // namespace

std::string_view to_string(Theorem t) {
    switch (t) {
        case Theorem::FiniteSystem: return "T1.1";
        case Theorem::LocallyFiniteSystem: return "T1.2";
        case Theorem::FiniteScalar: return "T5.1";
        case Theorem::LocallyFiniteScalar: return "T5.2";
    }
    return "?";
}

Theorem theorem_from_string(std::string_view s) {
    for (Theorem t : {Theorem::FiniteSystem, Theorem::LocallyFiniteSystem, Theorem::FiniteScalar,
                      Theorem::LocallyFiniteScalar}) {
        if (to_string(t) == s) return t;
    }
    fail(ErrorCode::ParseError, "unknown theorem label '" + std::string(s) + "'");
}

const HypothesisCheck* IntervalReport::find(std::string_view name) const {
    for (const auto& h : hypotheses) {
        if (h.name == name) return &h;
    }
    return nullptr;
}

double report_round(double v) {
    if (!std::isfinite(v) || v == 0.0) return v;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

std::vector<double> kappa_finite(const ProblemSpec& prob) {
    prob.validate();
    std::vector<double> k{std::pow(integrate(prob.g(), prob.h1) / prob.p, -1.0 / prob.p)};
    if (!prob.scalar) k.push_back(std::pow(integrate(prob.g(), prob.h2) / prob.q, -1.0 / prob.q));
    return k;
}

LocalMass local_mass(const WeightedGraph& g, std::size_t x0, double p, double q, const VertexFunction& h1,
                     const VertexFunction& h2) {
    if (x0 >= g.size()) fail(ErrorCode::UnknownVertex, "local_mass: x0 is not a vertex");
    require_domain(g, h1, "h1");
    auto mass = [&](double r, const VertexFunction& h) {
        double M = std::pow(g.degree(x0) / (2.0 * g.mu(x0)), r / 2.0) * g.mu(x0) + h[x0] * g.mu(x0);
        const auto ys = g.neighbors(x0);
        const auto ws = g.neighbor_weights(x0);
        for (std::size_t k = 0; k < ys.size(); ++k) M += std::pow(ws[k] / (2.0 * g.mu(ys[k])), r / 2.0) * g.mu(ys[k]);
        return M;
    };
    LocalMass out{mass(p, h1), std::nullopt};
    if (!h2.empty()) {
        require_domain(g, h2, "h2");
        out.M2 = mass(q, h2);
    }
    return out;
}

double box_max_F(const NonlinearityModel& model, std::size_t vertex_count, double s_max, double t_max,
                 const MaxOptions& options) {
    if (!(s_max > 0.0) || !(t_max > 0.0)) fail(ErrorCode::BadParam, "box bounds must be > 0");
    if (options.grid_points < 3) fail(ErrorCode::BadParam, "grid needs at least 3 points per axis");
    const bool t0 = model.traits().t_independent;
    if (use_corner(model, options)) return corner_max_F(model, vertex_count, s_max, t_max, t0);
    return grid_max_F(model, vertex_count, s_max, t_max, options.grid_points, t0);
}

double envelope_max(const Envelope& envelope, double radius, const MaxOptions& options) {
    if (!(radius > 0.0)) fail(ErrorCode::BadParam, "envelope radius must be > 0");
    if (options.grid_points < 3) fail(ErrorCode::BadParam, "grid needs at least 3 points");
    return grid_max_envelope(envelope, radius, options.grid_points);
}

IntervalReport interval_finite(const ProblemSpec& prob, const SystemConstants& c, const MaxOptions& options) {
    prob.validate();
    if (prob.scalar) fail(ErrorCode::BadParam, "interval_finite needs a coupled problem; use interval_scalar");
    require_positive_constants({c.gamma1, c.gamma2, c.delta1, c.delta2});
    const auto& g = prob.g();
    const double p = prob.p, q = prob.q;

    IntervalReport r;
    r.theorem = Theorem::FiniteSystem;
    r.kappa = kappa_finite(prob);
    r.gamma_level = std::pow(c.gamma1, p) + std::pow(c.gamma2, q);
    const double S = std::pow(p * r.gamma_level, 1.0 / p) / std::pow(min_value(prob.h1) * g.mu_min(), 1.0 / p);
    const double T = std::pow(q * r.gamma_level, 1.0 / q) / std::pow(min_value(prob.h2) * g.mu_min(), 1.0 / q);
    r.box = {S, T};

    r.hypotheses.push_back({"potentials_positive", true,
                            "min h1 = " + num(min_value(prob.h1)) + ", min h2 = " + num(min_value(prob.h2))});
    r.hypotheses.push_back(check_exponents(prob, 1.0));
    r.hypotheses.push_back(check_c1(*prob.model));
    r.hypotheses.push_back(check_zero_at_origin(prob));
    r.hypotheses.push_back(check_growth(prob));
    r.hypotheses.push_back(check_delta({c.gamma1, c.gamma2}, {c.delta1, c.delta2}, r.kappa));
    HypothesisCheck refinement;
    r.box_max = box_value(*prob.model, g.size(), S, T, false, options, refinement);
    r.hypotheses.push_back(refinement);

    r.f_at_delta = inf_F_at(prob, c.delta1, c.delta2);
    r.phi_at_delta = std::pow(c.delta1, p) / p * integrate(g, prob.h1) + std::pow(c.delta2, q) / q * integrate(g, prob.h2);
    const double Lambda1 = r.box_max * g.total_measure() / r.gamma_level;
    const double Lambda2 = r.f_at_delta * g.total_measure() / r.phi_at_delta;
    r.lambda_hi = Lambda1 > 0.0 ? 1.0 / Lambda1 : kInf;
    r.lambda_lo = Lambda2 > 0.0 ? 1.0 / Lambda2 : kInf;
    r.nontrivial_certified = nontrivial(prob);
    finish(r);
    return r;
}

IntervalReport interval_locally_finite(const ProblemSpec& prob, const SystemConstants& c, const LocalFloors& floors,
                                       const MaxOptions& options) {
    prob.validate();
    if (prob.scalar) fail(ErrorCode::BadParam, "interval_locally_finite needs a coupled problem; use interval_scalar");
    if (!prob.model->envelope()) fail(ErrorCode::MissingEnvelope, "locally finite mode needs an envelope (a, b)");
    require_positive_constants({c.gamma1, c.gamma2, c.delta1, c.delta2});
    if (!(floors.h0 > 0.0) || !(floors.mu0 > 0.0)) fail(ErrorCode::BadParam, "floors h0, mu0 must be > 0");
    const auto& g = prob.g();
    const double p = prob.p, q = prob.q;

    IntervalReport r;
    r.theorem = Theorem::LocallyFiniteSystem;
    const LocalMass M = local_mass(g, floors.x0, p, q, prob.h1, prob.h2);
    r.local_mass = std::vector<double>{M.M1, *M.M2};
    r.kappa = {std::pow(M.M1 / p, -1.0 / p), std::pow(*M.M2 / q, -1.0 / q)};
    r.gamma_level = std::pow(c.gamma1, p) + std::pow(c.gamma2, q);
    const double R = std::pow(floors.h0 * floors.mu0, -1.0 / p) * std::pow(p * r.gamma_level, 1.0 / p) +
                     std::pow(floors.h0 * floors.mu0, -1.0 / q) * std::pow(q * r.gamma_level, 1.0 / q);
    r.box = {R};

    r.hypotheses.push_back(check_floors(prob, floors));
    r.hypotheses.push_back(check_exponents(prob, 2.0));
    r.hypotheses.push_back(check_first_order(prob));
    r.hypotheses.push_back(check_c1(*prob.model));
    r.hypotheses.push_back(check_zero_at_origin(prob));
    r.hypotheses.push_back(check_growth(prob));
    r.hypotheses.push_back(check_envelope(prob));
    r.hypotheses.push_back(check_delta({c.gamma1, c.gamma2}, {c.delta1, c.delta2}, r.kappa));
    const Envelope& env = *prob.model->envelope();
    HypothesisCheck refinement;
    const double a_max = envelope_value(env, R, options, refinement);
    r.hypotheses.push_back(refinement);
    r.box_max = a_max * integrate(g, env.b.on(g.size()));

    r.f_at_delta = prob.model->F(floors.x0, c.delta1, c.delta2);
    r.phi_at_delta = std::pow(c.delta1, p) * M.M1 / p + std::pow(c.delta2, q) * *M.M2 / q;
    const double Theta1 = r.box_max / r.gamma_level;
    const double Theta2 = r.f_at_delta / r.phi_at_delta;
    r.lambda_hi = Theta1 > 0.0 ? 1.0 / Theta1 : kInf;
    r.lambda_lo = Theta2 > 0.0 ? 1.0 / Theta2 : kInf;
    r.nontrivial_certified = nontrivial(prob);
    finish(r);
    return r;
}

IntervalReport interval_scalar(const ProblemSpec& prob, double gamma, double delta, GraphMode mode,
                               const std::optional<LocalFloors>& floors, const MaxOptions& options) {
    prob.validate();
    if (!prob.scalar) fail(ErrorCode::BadParam, "interval_scalar needs a single-equation problem");
    require_positive_constants({gamma, delta});
    const auto& g = prob.g();
    const double p = prob.p;

    IntervalReport r;
    r.gamma_level = std::pow(gamma, p);
    HypothesisCheck refinement;

    if (mode == GraphMode::Finite) {
        r.theorem = Theorem::FiniteScalar;
        r.kappa = kappa_finite(prob);
        const double S = std::pow(p * r.gamma_level, 1.0 / p) / std::pow(min_value(prob.h1) * g.mu_min(), 1.0 / p);
        r.box = {S};
        r.hypotheses.push_back({"potentials_positive", true, "min h = " + num(min_value(prob.h1))});
        r.hypotheses.push_back(check_exponents(prob, 1.0));
        r.hypotheses.push_back(check_c1(*prob.model));
        r.hypotheses.push_back(check_zero_at_origin(prob));
        r.hypotheses.push_back(check_growth(prob));
        r.hypotheses.push_back(check_delta({gamma}, {delta}, r.kappa));
        r.box_max = box_value(*prob.model, g.size(), S, 1.0, true, options, refinement);
        r.hypotheses.push_back(refinement);
        r.f_at_delta = inf_F_at(prob, delta, 0.0);
        r.phi_at_delta = std::pow(delta, p) / p * integrate(g, prob.h1);
        const double L1 = r.box_max * g.total_measure() / r.gamma_level;
        const double L2 = r.f_at_delta * g.total_measure() / r.phi_at_delta;
        r.lambda_hi = L1 > 0.0 ? 1.0 / L1 : kInf;
        r.lambda_lo = L2 > 0.0 ? 1.0 / L2 : kInf;
    } else {
        if (!floors) fail(ErrorCode::BadParam, "locally finite mode needs floors (x0, h0, mu0)");
        if (!prob.model->envelope()) fail(ErrorCode::MissingEnvelope, "locally finite mode needs an envelope (a, b)");
        if (!(floors->h0 > 0.0) || !(floors->mu0 > 0.0)) fail(ErrorCode::BadParam, "floors h0, mu0 must be > 0");
        r.theorem = Theorem::LocallyFiniteScalar;
        const LocalMass M = local_mass(g, floors->x0, p, p, prob.h1, VertexFunction{});
        r.local_mass = std::vector<double>{M.M1};
        r.kappa = {std::pow(M.M1 / p, -1.0 / p)};
        const double R = std::pow(floors->h0 * floors->mu0, -1.0 / p) * std::pow(p * r.gamma_level, 1.0 / p);
        r.box = {R};
        r.hypotheses.push_back(check_floors(prob, *floors));
        r.hypotheses.push_back(check_exponents(prob, 2.0));
        r.hypotheses.push_back(check_first_order(prob));
        r.hypotheses.push_back(check_c1(*prob.model));
        r.hypotheses.push_back(check_zero_at_origin(prob));
        r.hypotheses.push_back(check_growth(prob));
        r.hypotheses.push_back(check_envelope(prob));
        r.hypotheses.push_back(check_delta({gamma}, {delta}, r.kappa));
        const Envelope& env = *prob.model->envelope();
        const double a_max = envelope_value(env, R, options, refinement);
        r.hypotheses.push_back(refinement);
        r.box_max = a_max * integrate(g, env.b.on(g.size()));
        r.f_at_delta = prob.model->F(floors->x0, delta, 0.0);
        r.phi_at_delta = std::pow(delta, p) * M.M1 / p;
        const double T1 = r.box_max / r.gamma_level;
        const double T2 = r.f_at_delta / r.phi_at_delta;
        r.lambda_hi = T1 > 0.0 ? 1.0 / T1 : kInf;
        r.lambda_lo = T2 > 0.0 ? 1.0 / T2 : kInf;
        r.notes.push_back(
            "kappa uses (M/p)^(-1/p) from the local mass, since the integral of h diverges on an infinite graph");
        r.notes.push_back("radius bound uses h0^(-1/p); a scalar problem has no second exponent q");
        r.notes.push_back("lower end uses F(x0, delta) in the numerator rather than an integral of F(x, delta)");
    }
    r.nontrivial_certified = nontrivial(prob);
    finish(r);
    return r;
}

}  // namespace graphvar
