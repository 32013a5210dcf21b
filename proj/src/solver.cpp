#include "graphvar/solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <exception>
#include <limits>
#include <thread>

#include "graphvar/rng.hpp"

namespace graphvar {
namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

constexpr double kDivergence = 1e8;
constexpr double kNewtonSwitch = 1e-3;
constexpr int kGradientPhase = 200;  // descent iterations before Newton is tried regardless
constexpr double kArmijo = 1e-4;
constexpr int kBacktracks = 40;
constexpr double kSaddleThreshold = -1e-6;
constexpr int kSegmentSamples = 64;
constexpr int kPolishSteps = 40;

// Evaluates the action and its gradient on a packed vector (u, v).
class Packed {
public:
    Packed(const ProblemSpec& prob, double lambda)
        : prob_(prob), lambda_(lambda), free_(prob.free_vertices()), N_(prob.unknowns()),
          mu_(N_), sqrt_mu_(N_) {
        for (std::size_t i = 0; i < N_; ++i) {
            mu_[i] = prob.g().mu(free_[i % free_.size()]);
            sqrt_mu_[i] = std::sqrt(mu_[i]);
        }
    }

    std::size_t size() const { return N_; }
    const Vec& mu() const { return mu_; }
    const Vec& sqrt_mu() const { return sqrt_mu_; }

    // Held vertices are not unknowns: unpack writes zero there, pack drops them.
    StatePair unpack(const Vec& x) const {
        const std::size_t k = free_.size();
        StatePair w = zero_state(prob_);
        for (std::size_t i = 0; i < k; ++i) w.u[free_[i]] = x[i];
        if (!prob_.scalar) {
            for (std::size_t i = 0; i < k; ++i) w.v[free_[i]] = x[k + i];
        }
        return w;
    }

    Vec pack(const StatePair& w) const {
        const std::size_t k = free_.size();
        Vec x(N_);
        for (std::size_t i = 0; i < k; ++i) x[i] = w.u[free_[i]];
        if (!prob_.scalar) {
            for (std::size_t i = 0; i < k; ++i) x[k + i] = w.v[free_[i]];
        }
        return x;
    }

    double action(const Vec& x) const { return graphvar::action(prob_, lambda_, unpack(x)); }

    Vec gradient(const Vec& x) const {
        const StatePair G = action_gradient(prob_, lambda_, unpack(x));
        return pack(G);
    }

    /// mu-scaled symmetric Hessian D^{-1} H D^{-1}, D = diag(sqrt mu).
    Mat scaled_hessian(const Vec& x) const {
        const double h = 1e-6 * (1.0 + x.lpNorm<Eigen::Infinity>());
        Mat J(N_, N_);
        Vec xp = x;
        for (std::size_t j = 0; j < N_; ++j) {
            xp[j] = x[j] + h;
            const Vec gp = gradient(xp);
            xp[j] = x[j] - h;
            const Vec gm = gradient(xp);
            xp[j] = x[j];
            J.col(j) = (gp - gm) / (2.0 * h);
        }
        // Euclidean Hessian is diag(mu) J; scale to sqrt(mu) J / sqrt(mu).
        Mat Hs(N_, N_);
        for (std::size_t i = 0; i < N_; ++i) {
            for (std::size_t j = 0; j < N_; ++j) Hs(i, j) = sqrt_mu_[i] * J(i, j) / sqrt_mu_[j];
        }
        return 0.5 * (Hs + Hs.transpose());
    }

    double weighted_norm(const Vec& d) const { return std::sqrt((mu_.array() * d.array().square()).sum()); }

    double weighted_dot(const Vec& a, const Vec& b) const { return (mu_.array() * a.array() * b.array()).sum(); }

private:
    const ProblemSpec& prob_;
    double lambda_;
    std::vector<std::size_t> free_;
    std::size_t N_;
    Vec mu_, sqrt_mu_;
};

double sup(const Vec& g) { return g.size() == 0 ? 0.0 : g.lpNorm<Eigen::Infinity>(); }

bool diverged(const Vec& x) { return !x.allFinite() || sup(x) > kDivergence; }

PointKind classify(const Mat& Hs) {
    Eigen::SelfAdjointEigenSolver<Mat> es(Hs, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() < kSaddleThreshold ? PointKind::Saddle : PointKind::Minimizer;
}

// Newton direction from the scaled Hessian: solves (Hs + tau) y = -sqrt(mu) G
// in the eigenbasis. With positive_definite the spectrum is shifted so the
// direction descends; otherwise eigenvalues keep their sign and are only
// floored in magnitude, which lets Newton converge to saddles.
Vec newton_direction(const Packed& P, const Mat& Hs, const Vec& G, bool positive_definite, double extra_shift) {
    Eigen::SelfAdjointEigenSolver<Mat> es(Hs);
    const Vec& ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    const double floor = 1e-12 * scale;
    Vec rhs = -(P.sqrt_mu().array() * G.array()).matrix();
    Vec coeff = es.eigenvectors().transpose() * rhs;
    double tau = extra_shift * scale;
    if (positive_definite && ev.minCoeff() < floor) tau += floor - ev.minCoeff();
    for (Eigen::Index i = 0; i < coeff.size(); ++i) {
        double lam = ev[i] + tau;
        if (!positive_definite && std::abs(lam) < floor) lam = std::copysign(floor, lam == 0.0 ? 1.0 : lam);
        coeff[i] /= lam;
    }
    Vec y = es.eigenvectors() * coeff;
    return (y.array() / P.sqrt_mu().array()).matrix();
}

// Newton steps past the tolerance for as long as each one cuts the residual by
// at least a tenth. On energies that are flat near a root (exponents above 2) the
// tolerance alone accepts a whole neighbourhood; polishing moves accepted
// points onto the root itself so duplicates merge.
Vec polish(const Packed& P, Vec x, int& iterations) {
    Vec G = P.gradient(x);
    double res = sup(G);
    for (int k = 0; k < kPolishSteps && res > 0.0; ++k) {
        const Vec d = newton_direction(P, P.scaled_hessian(x), G, false, 0.0);
        bool improved = false;
        double alpha = 1.0;
        for (int b = 0; b < 8 && !improved; ++b, alpha *= 0.5) {
            const Vec xn = x + alpha * d;
            if (diverged(xn)) continue;
            Vec Gn = P.gradient(xn);
            const double rn = sup(Gn);
            if (rn < 0.9 * res) {
                x = xn;
                G = std::move(Gn);
                res = rn;
                improved = true;
            }
        }
        ++iterations;
        if (!improved) break;
    }
    return x;
}

CriticalPoint finish_point(const ProblemSpec& prob, const Packed& P, const Vec& x, int iterations,
                           SolveStatus status) {
    CriticalPoint cp;
    cp.state = P.unpack(x);
    cp.iterations = iterations;
    cp.status = status;
    if (x.allFinite()) {
        cp.action_value = P.action(x);
        cp.residual_sup = sup(P.gradient(x));
        if (status != SolveStatus::NoConvergence) cp.kind = classify(P.scaled_hessian(x));
    } else {
        cp.action_value = std::numeric_limits<double>::quiet_NaN();
        cp.residual_sup = std::numeric_limits<double>::infinity();
    }
    (void)prob;
    return cp;
}

int thread_count(const SolverConfig& cfg, int jobs) {
    int n = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("GRAPHVAR_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    return std::clamp(n, 1, std::max(1, jobs));
}

StatePair random_state(const ProblemSpec& prob, const SolverConfig& cfg, std::uint64_t stream) {
    CounterRng rng(cfg.seed, stream);
    const auto free = prob.free_vertices();
    StatePair w = zero_state(prob);
    for (std::size_t x : free) w.u[x] = rng.uniform(-cfg.start_radius_u, cfg.start_radius_u);
    if (!prob.scalar) {
        for (std::size_t x : free) w.v[x] = rng.uniform(-cfg.start_radius_v, cfg.start_radius_v);
    }
    return w;
}

// Highest-action point on the segment between two known critical points: a
// cheap guess for a mountain-pass point between them.
StatePair segment_max(const Packed& P, const StatePair& a, const StatePair& b) {
    const Vec xa = P.pack(a), xb = P.pack(b);
    Vec best = xa;
    double best_f = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= kSegmentSamples; ++k) {
        const double s = static_cast<double>(k) / (kSegmentSamples + 1);
        const Vec x = xa + s * (xb - xa);
        const double f = P.action(x);
        if (f > best_f) {
            best_f = f;
            best = x;
        }
    }
    return P.unpack(best);
}

bool is_new(const ProblemSpec& prob, const std::vector<StatePair>& known, const StatePair& w, double tol) {
    return std::all_of(known.begin(), known.end(), [&](const StatePair& k) { return w_distance(prob, k, w) > tol; });
}

}  // namespace

void SolverConfig::validate() const {
    if (starts < 1) fail(ErrorCode::BadParam, "starts must be >= 1");
    if (max_iters < 1) fail(ErrorCode::BadParam, "max_iters must be >= 1");
    if (!(grad_tol > 0.0)) fail(ErrorCode::BadParam, "grad_tol must be > 0");
    if (!(distinct_tol > 0.0)) fail(ErrorCode::BadParam, "distinct_tol must be > 0");
    if (!(deflation_power > 0.0)) fail(ErrorCode::BadParam, "deflation_power must be > 0");
    if (!(deflation_shift >= 0.0)) fail(ErrorCode::BadParam, "deflation_shift must be >= 0");
    if (deflation_attempts < 0) fail(ErrorCode::BadParam, "deflation_attempts must be >= 0");
    if (!(start_radius_u > 0.0) || !(start_radius_v > 0.0)) fail(ErrorCode::BadParam, "start radii must be > 0");
    if (threads < 0) fail(ErrorCode::BadParam, "threads must be >= 0");
}

std::string_view to_string(PointKind k) {
    switch (k) {
        case PointKind::Minimizer: return "minimizer";
        case PointKind::Saddle: return "saddle";
        case PointKind::Unclassified: return "unclassified";
    }
    return "unclassified";
}

PointKind point_kind_from_string(std::string_view s) {
    if (s == "minimizer") return PointKind::Minimizer;
    if (s == "saddle") return PointKind::Saddle;
    if (s == "unclassified") return PointKind::Unclassified;
    fail(ErrorCode::ParseError, "unknown point kind '" + std::string(s) + "'");
}

void require_solvable(const ProblemSpec& prob) {
    prob.validate();
    if (prob.p < 2.0 || (!prob.scalar && prob.q < 2.0)) {
        fail(ErrorCode::BadParam, "the solver needs p, q >= 2");
    }
}

double residual(const ProblemSpec& prob, double lambda, const StatePair& w) {
    const StatePair G = action_gradient(prob, lambda, w);
    double r = sup_norm(G.u);
    if (!prob.scalar) r = std::max(r, sup_norm(G.v));
    return r;
}

double hessian_min_eigenvalue(const ProblemSpec& prob, double lambda, const StatePair& w) {
    require_state(prob, w);
    const Packed P(prob, lambda);
    Eigen::SelfAdjointEigenSolver<Mat> es(P.scaled_hessian(P.pack(w)), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

CriticalPoint minimize(const ProblemSpec& prob, double lambda, const StatePair& start, const SolverConfig& cfg) {
    cfg.validate();
    require_solvable(prob);
    require_state(prob, start);
    const Packed P(prob, lambda);

    Vec x = P.pack(start);
    double f = P.action(x);
    Vec G = P.gradient(x);
    double step = 1.0;
    int it = 0;
    for (; it < cfg.max_iters; ++it) {
        if (diverged(x) || !std::isfinite(f)) return finish_point(prob, P, x, it, SolveStatus::NoConvergence);
        const double res = sup(G);
        if (res <= cfg.grad_tol) {
            const Vec xp = polish(P, x, it);
            return finish_point(prob, P, xp, it, SolveStatus::Converged);
        }

        bool moved = false;
        if (res < kNewtonSwitch || it >= kGradientPhase) {
            const Mat Hs = P.scaled_hessian(x);
            for (double shift : {0.0, 1e-8, 1e-6, 1e-4, 1e-2}) {
                const Vec d = newton_direction(P, Hs, G, true, shift);
                const double slope = P.weighted_dot(G, d);
                if (!(slope < 0.0)) continue;
                double alpha = 1.0;
                for (int k = 0; k < kBacktracks; ++k, alpha *= 0.5) {
                    const Vec xn = x + alpha * d;
                    const double fn = P.action(xn);
                    if (!std::isfinite(fn)) continue;
                    // Near the optimum action differences drown in rounding; fall back to the residual.
                    const bool noise = -slope * alpha < 64.0 * 2.2e-16 * (1.0 + std::abs(f));
                    Vec Gn;
                    bool accept = fn <= f + kArmijo * alpha * slope;
                    if (!accept && noise) {
                        Gn = P.gradient(xn);
                        accept = sup(Gn) < res;
                    }
                    if (accept) {
                        x = xn;
                        f = fn;
                        G = Gn.size() ? Gn : P.gradient(x);
                        moved = true;
                        break;
                    }
                }
                if (moved) break;
            }
        }
        if (!moved) {
            const Vec d = -G;
            const double slope = -P.weighted_dot(G, G);
            double alpha = std::min(2.0 * step, 1e6);
            for (int k = 0; k < kBacktracks; ++k, alpha *= 0.5) {
                const Vec xn = x + alpha * d;
                const double fn = P.action(xn);
                if (std::isfinite(fn) && fn <= f + kArmijo * alpha * slope) {
                    x = xn;
                    f = fn;
                    G = P.gradient(x);
                    step = alpha;
                    moved = true;
                    break;
                }
            }
        }
        if (!moved) break;  // no direction decreases the action any more
    }
    if (sup(G) <= cfg.grad_tol) x = polish(P, x, it);
    const SolveStatus status = sup(G) <= cfg.grad_tol ? SolveStatus::Converged : SolveStatus::NoConvergence;
    return finish_point(prob, P, x, it, status);
}

CriticalPoint deflated_solve(const ProblemSpec& prob, double lambda, const std::vector<StatePair>& known,
                             const StatePair& start, const SolverConfig& cfg) {
    cfg.validate();
    require_solvable(prob);
    require_state(prob, start);
    for (const auto& k : known) require_state(prob, k);
    const Packed P(prob, lambda);
    std::vector<Vec> roots;
    for (const auto& k : known) roots.push_back(P.pack(k));

    const double power = cfg.deflation_power, shift = cfg.deflation_shift;
    auto log_factor = [&](const Vec& x) {
        double s = 0.0;
        for (const Vec& r : roots) s += std::log(std::pow(P.weighted_norm(x - r), -power) + shift);
        return s;
    };
    // grad log M in the Euclidean sense, pre-contracted with d.
    auto dlog_dot = [&](const Vec& x, const Vec& d) {
        double s = 0.0;
        for (const Vec& r : roots) {
            const Vec e = x - r;
            const double n = P.weighted_norm(e);
            const double t = std::pow(n, -power);
            s += -power * t / (n * n) * P.weighted_dot(e, d) / (t + shift);
        }
        return s;
    };
    auto merit = [&](const Vec& x, const Vec& G) { return std::exp(log_factor(x)) * P.weighted_norm(G); };

    Vec x = P.pack(start);
    for (const Vec& r : roots) {
        if (P.weighted_norm(x - r) == 0.0) return finish_point(prob, P, x, 0, SolveStatus::ConvergedToKnown);
    }
    Vec G = P.gradient(x);
    double m = merit(x, G);
    const int budget = std::min(cfg.max_iters, 500);
    int it = 0, failures = 0;
    for (; it < budget; ++it) {
        if (diverged(x) || !std::isfinite(m)) return finish_point(prob, P, x, it, SolveStatus::NoConvergence);
        if (sup(G) <= cfg.grad_tol) break;
        const Vec d = newton_direction(P, P.scaled_hessian(x), G, false, 0.0);
        const double denom = 1.0 - dlog_dot(x, d);
        const Vec dt = std::abs(denom) > 1e-12 ? Vec(d / denom) : d;
        double alpha = 1.0;
        bool accepted = false;
        Vec xn, Gn;
        double mn = 0.0;
        for (int k = 0; k < kBacktracks; ++k, alpha *= 0.5) {
            xn = x + alpha * dt;
            if (diverged(xn)) continue;
            Gn = P.gradient(xn);
            mn = merit(xn, Gn);
            if (std::isfinite(mn) && mn < (1.0 - kArmijo * alpha) * m) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            if (++failures > 20 || diverged(xn) || !std::isfinite(mn)) break;
        } else {
            failures = 0;
        }
        x = xn;
        G = Gn;
        m = mn;
    }
    if (!(sup(G) <= cfg.grad_tol)) return finish_point(prob, P, x, it, SolveStatus::NoConvergence);
    x = polish(P, x, it);
    const StatePair w = P.unpack(x);
    const SolveStatus status = is_new(prob, known, w, cfg.distinct_tol) ? SolveStatus::Converged
                                                                          : SolveStatus::ConvergedToKnown;
    return finish_point(prob, P, x, it, status);
}

SolutionSet find_three(const ProblemSpec& prob, double lambda, const SolverConfig& cfg) {
    cfg.validate();
    require_solvable(prob);
    const Packed P(prob, lambda);

    // Multistart phase: start i depends only on (seed, i), results are kept by index.
    std::vector<CriticalPoint> runs(static_cast<std::size_t>(cfg.starts));
    std::vector<std::exception_ptr> errors(runs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < runs.size(); i = next++) {
            try {
                runs[i] = minimize(prob, lambda, random_state(prob, cfg, i), cfg);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int nthreads = thread_count(cfg, cfg.starts);
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    SolutionSet out;
    out.lambda = lambda;
    out.candidates = cfg.starts;
    std::vector<CriticalPoint> found;
    std::vector<StatePair> known;
    auto accept = [&](CriticalPoint cp) {
        if (!cp.converged() || !is_new(prob, known, cp.state, cfg.distinct_tol)) return false;
        known.push_back(cp.state);
        found.push_back(std::move(cp));
        return true;
    };
    for (auto& cp : runs) accept(std::move(cp));

    // Deflation phase: segment maxima between known pairs first, then random starts.
    std::deque<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t j = 1; j < known.size(); ++j) {
        for (std::size_t i = 0; i < j; ++i) pairs.emplace_back(i, j);
    }
    for (int attempt = 0; known.size() < 3 && attempt < cfg.deflation_attempts; ++attempt) {
        StatePair start;
        if (!pairs.empty()) {
            const auto [i, j] = pairs.front();
            pairs.pop_front();
            start = segment_max(P, known[i], known[j]);
        } else {
            start = random_state(prob, cfg, static_cast<std::uint64_t>(cfg.starts) + attempt);
        }
        ++out.candidates;
        const std::size_t before = known.size();
        if (accept(deflated_solve(prob, lambda, known, start, cfg))) {
            for (std::size_t i = 0; i < before; ++i) pairs.emplace_back(i, before);
        }
    }

    std::stable_sort(found.begin(), found.end(),
                     [](const CriticalPoint& a, const CriticalPoint& b) { return a.action_value < b.action_value; });
    const StatePair zero = zero_state(prob);
    out.pairwise_distances.assign(found.size(), std::vector<double>(found.size(), 0.0));
    for (std::size_t i = 0; i < found.size(); ++i) {
        for (std::size_t j = i + 1; j < found.size(); ++j) {
            const double d = w_distance(prob, found[i].state, found[j].state);
            out.pairwise_distances[i][j] = out.pairwise_distances[j][i] = d;
        }
        out.nontrivial_flags.push_back(w_distance(prob, found[i].state, zero) > cfg.distinct_tol);
    }
    for (std::size_t x : prob.free_vertices()) {
        if (out.zero_excluded) break;
        out.zero_excluded = prob.model->Fs(x, 0.0, 0.0) != 0.0 || (!prob.scalar && prob.model->Ft(x, 0.0, 0.0) != 0.0);
    }
    out.points = std::move(found);
    return out;
}

}  // namespace graphvar
