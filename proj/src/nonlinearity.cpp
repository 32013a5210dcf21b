#include "graphvar/nonlinearity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <sstream>

#include "graphvar/rng.hpp"

namespace graphvar {

double VertexCoefficient::sup() const {
    if (!values_) return constant_;
    return *std::max_element(values_->values().begin(), values_->values().end());
}

VertexFunction VertexCoefficient::on(std::size_t n) const {
    if (!values_) return VertexFunction::constant(n, constant_);
    if (values_->size() != n) fail(ErrorCode::DomainMismatch, "coefficient defined on a different graph");
    return *values_;
}

NonlinearityModel::NonlinearityModel(std::string name, Evaluator F, Evaluator Fs, Evaluator Ft, Traits traits)
    : name_(std::move(name)), F_(std::move(F)), Fs_(std::move(Fs)), Ft_(std::move(Ft)), traits_(traits) {}

NonlinearityModel& NonlinearityModel::set_growth(GrowthBound g) {
    growth_ = std::move(g);
    return *this;
}

NonlinearityModel& NonlinearityModel::set_envelope(Envelope e) {
    envelope_ = std::move(e);
    return *this;
}

NonlinearityModel& NonlinearityModel::set_seams(std::vector<double> s, std::vector<double> t) {
    seams_s_ = std::move(s);
    seams_t_ = std::move(t);
    return *this;
}

NonlinearityModel& NonlinearityModel::set_sample_hints(SampleHints h) {
    hints_ = std::move(h);
    return *this;
}

NonlinearityModel& NonlinearityModel::set_descriptor(std::string d) {
    descriptor_ = std::move(d);
    return *this;
}

namespace {

double sign(double v) { return v < 0.0 ? -1.0 : 1.0; }

// Three-piece radial profile: derivative d(a) for a = |s| and its primitive
// P(a) with P(0) = 0, continuity constants fixed at the seams.
struct Profile {
    double omega;       // inner seam
    double outer_seam;  // k * omega
    double power;       // middle piece a^power - omega^power
    double r;           // outer exponent
    bool outer_closed;  // outer piece includes the seam itself

    double c_mid = 0.0;
    double c_out = 0.0;

    Profile(double w, double k, double pw, double rr, bool closed)
        : omega(w), outer_seam(k * w), power(pw), r(rr), outer_closed(closed) {
        c_mid = inner_primitive(omega) - mid_primitive_raw(omega);
        c_out = mid_primitive_raw(outer_seam) + c_mid - outer_primitive_raw(outer_seam);
    }

    int piece(double a) const {
        if (a <= omega) return 0;
        if (outer_closed ? a < outer_seam : a <= outer_seam) return 1;
        return 2;
    }

    double inner_primitive(double a) const { return omega * a - 0.5 * a * a; }
    double mid_primitive_raw(double a) const {
        return std::pow(a, power + 1.0) / (power + 1.0) - std::pow(omega, power) * a;
    }
    double outer_primitive_raw(double a) const {
        const double e = power + 1.0 - r;
        return std::pow(outer_seam, r) * std::pow(a, e) / e - std::pow(omega, power) * a;
    }

    double derivative(double a) const {
        switch (piece(a)) {
            case 0: return omega - a;
            case 1: return std::pow(a, power) - std::pow(omega, power);
            default: return std::pow(outer_seam, r) * std::pow(a, power - r) - std::pow(omega, power);
        }
    }

    double primitive(double a) const {
        switch (piece(a)) {
            case 0: return inner_primitive(a);
            case 1: return mid_primitive_raw(a) + c_mid;
            default: return outer_primitive_raw(a) + c_out;
        }
    }

    // Odd extension of the primitive; its derivative is the even profile.
    double odd_primitive(double s) const { return sign(s) * primitive(std::abs(s)); }
};

void require(bool ok, const std::string& what) {
    if (!ok) fail(ErrorCode::BadParam, what);
}

std::string descriptor_6_1(double w1, double w2, double r1, double r2) {
    std::ostringstream os;
    os.precision(17);
    os << R"({"builtin":"example_6_1","params":{"omega1":)" << w1 << R"(,"omega2":)" << w2 << R"(,"r1":)" << r1
       << R"(,"r2":)" << r2 << "}}";
    return os.str();
}

// Composite Gauss-Legendre integral of f over [lo, hi].
template <typename Fn>
double quadrature(Fn f, double lo, double hi, int panels = 64) {
    static constexpr std::array<double, 4> nodes{0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                                 0.9602898564975363};
    static constexpr std::array<double, 4> weights{0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                                   0.1012285362903763};
    if (hi <= lo) return 0.0;
    const double h = (hi - lo) / panels;
    double total = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double mid = lo + (k + 0.5) * h;
        const double half = 0.5 * h;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            total += weights[i] * half * (f(mid - half * nodes[i]) + f(mid + half * nodes[i]));
        }
    }
    return total;
}

}  // namespace

NonlinearityModel example_6_1(double omega1, double omega2, double r1, double r2) {
    require(omega1 > 0.0 && omega2 > 0.0, "example_6_1 needs omega1, omega2 > 0");
    require(r1 > 1.0 && r1 <= 2.0, "example_6_1 needs r1 in (1, 2]");
    require(r2 > 1.0 && r2 <= 3.0, "example_6_1 needs r2 in (1, 3]");

    auto A = std::make_shared<const Profile>(omega1, 4.0, 3.0, r1, true);
    auto B = std::make_shared<const Profile>(omega2, 5.0, 4.0, r2, true);

    NonlinearityModel::Traits traits;
    traits.vertex_independent = true;
    traits.corner_maximal = true;  // both partials are >= 0 everywhere

    NonlinearityModel model(
        "example_6_1",
        [A, B](std::size_t, double s, double t) { return A->odd_primitive(s) + B->odd_primitive(t); },
        [A](std::size_t, double s, double) { return A->derivative(std::abs(s)); },
        [B](std::size_t, double, double t) { return B->derivative(std::abs(t)); }, traits);

    GrowthBound growth;
    growth.alpha = 4.0 - r1;
    growth.beta = 5.0 - r2;
    growth.f1 = std::pow(4.0 * omega1, r1) / (4.0 - r1);
    growth.f2 = std::pow(5.0 * omega2, r2) / (5.0 - r2);
    growth.g = 0.5 * omega1 * omega1 + 0.25 * std::pow(4.0 * omega1, 4) + 0.75 * std::pow(omega1, 4) +
               0.5 * omega2 * omega2 + 0.2 * std::pow(5.0 * omega2, 5) + 0.8 * std::pow(omega2, 5);
    model.set_growth(growth);
    model.set_seams({-4.0 * omega1, -omega1, 0.0, omega1, 4.0 * omega1},
                    {-5.0 * omega2, -omega2, 0.0, omega2, 5.0 * omega2});
    model.set_sample_hints({6.0 * omega1, 7.0 * omega2, {0}});
    model.set_descriptor(descriptor_6_1(omega1, omega2, r1, r2));
    return model;
}

double example_6_1_displayed_F(double w1, double w2, double r1, double r2, double s, double t) {
    const double a = std::abs(s);
    const double b = std::abs(t);
    const int is = a <= w1 ? 0 : (a < 4.0 * w1 ? 1 : 2);
    const int it = b <= w2 ? 0 : (b < 5.0 * w2 ? 1 : 2);
    const double c1 = std::pow(4.0 * w1, r1) / (4.0 - r1);
    const double c2 = std::pow(5.0 * w2, r2) / (5.0 - r2);
    const double w1_2 = w1 * w1, w1_3 = w1_2 * w1, w1_4 = w1_3 * w1;
    const double w2_2 = w2 * w2, w2_4 = w2_2 * w2_2, w2_5 = w2_4 * w2;
    const double s4 = std::pow(4.0 * w1, 4), t5 = std::pow(5.0 * w2, 5);

    // One branch per region, transcribed as displayed.
    if (is == 2 && it == 2)
        return 0.5 * w1_2 + 0.25 * s4 + 0.75 * w1_4 + c1 * std::pow(a, 4.0 - r1) - w1_3 * a - s4 / (4.0 - r1) +
               0.5 * w2_2 + 0.2 * t5 + 0.8 * w2_5 + c2 * std::pow(b, 5.0 - r2) - w2_4 * b - t5 / (5.0 - r2);
    if (is == 0 && it == 1)
        return w1 * a - 0.5 * a * a + 0.5 * w2_2 + 0.2 * std::pow(b, 5) - w2_4 * b + 0.8 * w2_5;
    if (is == 0 && it == 2)
        return w1 * a - 0.5 * a * a + 0.5 * w2_2 + 0.2 * t5 + 0.8 * w2_5 + c2 * std::pow(b, 5.0 - r2) - w2_4 * b -
               t5 / (5.0 - r2);
    if (is == 1 && it == 0)
        return 0.5 * w1_2 + 0.25 * std::pow(a, 4) - w1_3 * a + 0.75 * w1_4 + w2 * b - 0.5 * b * b;
    if (is == 1 && it == 1)
        return 0.5 * w1_2 + 0.25 * std::pow(a, 4) - w1_3 * a + 0.75 * w1_4 + 0.5 * w2_2 + 0.2 * std::pow(b, 5) -
               w2_4 * b + 0.8 * w2_5;
    if (is == 1 && it == 2)
        return 0.5 * w1_2 + 0.25 * std::pow(a, 4) - w1_3 * a + 0.75 * w1_4 + 0.5 * w2_2 + 0.2 * t5 + 0.8 * w2_5 +
               c2 * std::pow(b, 5.0 - r2) - w2_4 * b - t5 / (5.0 - r2);
    if (is == 2 && it == 0)
        return 0.5 * w1_2 + 0.25 * s4 + 0.75 * w1_4 + c1 * std::pow(a, 4.0 - r1) - w1_3 * a - s4 / (4.0 - r1) +
               w2 * b - 0.5 * b * b;
    if (is == 2 && it == 1)
        return 0.5 * w1_2 + 0.25 * s4 + 0.75 * w1_4 + c1 * std::pow(a, 4.0 - r1) - w1_3 * a - s4 / (4.0 - r1) +
               0.5 * w2_2 + 0.2 * std::pow(b, 5) - w2_4 * b + 0.8 * w2_5;
    return w1 * a - 0.5 * a * a + w2 * b - 0.5 * b * b;
}

AntiderivativeCheck cross_check_example_6_1(double omega1, double omega2, double r1, double r2,
                                            std::size_t samples, std::uint64_t seed) {
    const NonlinearityModel model = example_6_1(omega1, omega2, r1, r2);
    const Profile A(omega1, 4.0, 3.0, r1, true);
    const Profile B(omega2, 5.0, 4.0, r2, true);

    // Quadrature of the displayed partials along the segment from 0,
    // split at the seams so each panel sees a smooth integrand.
    auto integrate_profile = [](const Profile& P, double a) {
        double total = 0.0;
        double lo = 0.0;
        for (double seam : {P.omega, P.outer_seam, a}) {
            const double hi = std::min(seam, a);
            total += quadrature([&](double x) { return P.derivative(x); }, lo, hi);
            lo = std::max(lo, hi);
        }
        return total;
    };

    AntiderivativeCheck out;
    CounterRng rng(seed, 0);
    const double S = 6.0 * omega1, T = 7.0 * omega2;
    for (std::size_t k = 0; k < samples; ++k) {
        const double s = rng.uniform(-S, S);
        const double t = rng.uniform(-T, T);
        const double integrated = model.F(0, s, t);
        const double displayed = example_6_1_displayed_F(omega1, omega2, r1, r2, s, t);
        const double rel = std::abs(integrated - displayed) / std::max(1.0, std::abs(displayed));
        if (s >= 0.0 && t >= 0.0) {
            const double quad = integrate_profile(A, s) + integrate_profile(B, t);
            const double rel_quad = std::abs(integrated - quad) / std::max(1.0, std::abs(quad));
            out.max_mismatch_first_quadrant = std::max({out.max_mismatch_first_quadrant, rel, rel_quad});
        } else {
            out.max_mismatch_other_quadrants = std::max(out.max_mismatch_other_quadrants, rel);
        }
        ++out.samples;
    }
    return out;
}

NonlinearityModel example_6_2(const WeightedGraph& g, std::size_t x0, double omega, double r) {
    require(omega > 0.0, "example_6_2 needs omega > 0");
    require(r > 3.0 && r <= 5.0, "example_6_2 needs r in (3, 5]");
    if (x0 >= g.size()) fail(ErrorCode::UnknownVertex, "example_6_2: x0 is not a vertex of the graph");

    auto P = std::make_shared<const Profile>(omega, 6.0, 5.0, r, false);

    NonlinearityModel::Traits traits;
    traits.vertex_independent = false;
    traits.t_independent = true;
    traits.corner_maximal = true;

    NonlinearityModel model(
        "example_6_2", [P, x0](std::size_t x, double s, double) { return x == x0 ? P->odd_primitive(s) : 0.0; },
        [P, x0](std::size_t x, double s, double) { return x == x0 ? P->derivative(std::abs(s)) : 0.0; },
        [](std::size_t, double, double) { return 0.0; }, traits);

    const std::size_t n = g.size();
    GrowthBound growth;
    growth.alpha = 6.0 - r;
    growth.beta = 0.0;
    growth.f1 = VertexCoefficient(VertexFunction::indicator(n, x0, std::pow(6.0 * omega, r) / (6.0 - r)));
    growth.f2 = 0.0;
    growth.g = VertexCoefficient(VertexFunction::indicator(
        n, x0, 0.5 * omega * omega + (std::pow(6.0, 6) + 5.0) / 6.0 * std::pow(omega, 6)));
    model.set_growth(growth);
    model.set_envelope({[P](double a) { return P->primitive(a) + 1.0; },
                        VertexCoefficient(VertexFunction::indicator(n, x0, 1.0))});
    model.set_seams({-6.0 * omega, -omega, 0.0, omega, 6.0 * omega}, {});

    NonlinearityModel::SampleHints hints{8.0 * omega, 1.0, {x0}};
    if (n > 1) hints.vertices.push_back(x0 == 0 ? 1 : 0);
    model.set_sample_hints(hints);

    std::ostringstream os;
    os.precision(17);
    os << R"({"builtin":"example_6_2","params":{"omega":)" << omega << R"(,"r":)" << r << R"(,"x0":")"
       << g.id(x0) << R"("}})";
    model.set_descriptor(os.str());
    return model;
}

double example_6_2_displayed_F(double w, double r, double s) {
    const double a = std::abs(s);
    if (a <= w) return w * a - 0.5 * a * a;
    if (a <= 6.0 * w) return 0.5 * w * w + std::pow(a, 6) / 6.0 - std::pow(w, 5) * a + 5.0 / 6.0 * std::pow(w, 6);
    return 0.5 * w * w + (std::pow(6.0, 6) + 5.0) / 6.0 * std::pow(w, 6) - std::pow(6.0 * w, 6) / (6.0 - r) +
           std::pow(6.0 * w, r) * std::pow(a, 6.0 - r) / (6.0 - r) - std::pow(w, 5) * a;
}

namespace {

struct BilinearGrid {
    std::vector<double> s, t;
    std::vector<std::vector<double>> v;

    static std::size_t cell(const std::vector<double>& axis, double x) {
        auto it = std::upper_bound(axis.begin(), axis.end(), x);
        std::size_t i = it == axis.begin() ? 0 : static_cast<std::size_t>(it - axis.begin()) - 1;
        return std::min(i, axis.size() - 2);
    }

    // Value and both partials of the bilinear patch containing (x, y).
    std::array<double, 3> eval(double x, double y) const {
        const std::size_t i = cell(s, x), j = cell(t, y);
        const double hx = s[i + 1] - s[i], hy = t[j + 1] - t[j];
        const double a = (x - s[i]) / hx, b = (y - t[j]) / hy;
        const double f00 = v[i][j], f10 = v[i + 1][j], f01 = v[i][j + 1], f11 = v[i + 1][j + 1];
        const double value = (1 - a) * (1 - b) * f00 + a * (1 - b) * f10 + (1 - a) * b * f01 + a * b * f11;
        const double dx = ((1 - b) * (f10 - f00) + b * (f11 - f01)) / hx;
        const double dy = ((1 - a) * (f01 - f00) + a * (f11 - f10)) / hy;
        return {value, dx, dy};
    }
};

void check_table(const std::vector<double>& s, const std::vector<double>& t,
                 const std::vector<std::vector<double>>& v, const std::string& what) {
    if (v.size() != s.size()) fail(ErrorCode::BadParam, what + " table has the wrong number of rows");
    for (const auto& row : v) {
        if (row.size() != t.size()) fail(ErrorCode::BadParam, what + " table has a row of the wrong length");
        for (double x : row) {
            if (!std::isfinite(x)) fail(ErrorCode::NonFiniteValue, what + " table contains a non-finite value");
        }
    }
}

}  // namespace

NonlinearityModel tabulated(TabulatedNonlinearity table) {
    auto strictly_increasing = [](const std::vector<double>& axis) {
        return axis.size() >= 2 && std::adjacent_find(axis.begin(), axis.end(), std::greater_equal<>()) == axis.end();
    };
    if (!strictly_increasing(table.s) || !strictly_increasing(table.t)) {
        fail(ErrorCode::BadParam, "table axes need at least two strictly increasing points");
    }
    check_table(table.s, table.t, table.F, "F");
    if (!table.Fs.empty()) check_table(table.s, table.t, table.Fs, "Fs");
    if (!table.Ft.empty()) check_table(table.s, table.t, table.Ft, "Ft");

    auto F = std::make_shared<const BilinearGrid>(BilinearGrid{table.s, table.t, table.F});
    std::shared_ptr<const BilinearGrid> Fs, Ft;
    if (!table.Fs.empty()) Fs = std::make_shared<const BilinearGrid>(BilinearGrid{table.s, table.t, table.Fs});
    if (!table.Ft.empty()) Ft = std::make_shared<const BilinearGrid>(BilinearGrid{table.s, table.t, table.Ft});

    NonlinearityModel::Traits traits;
    NonlinearityModel model(
        "table", [F](std::size_t, double s, double t) { return F->eval(s, t)[0]; },
        [F, Fs](std::size_t, double s, double t) { return Fs ? Fs->eval(s, t)[0] : F->eval(s, t)[1]; },
        [F, Ft](std::size_t, double s, double t) { return Ft ? Ft->eval(s, t)[0] : F->eval(s, t)[2]; }, traits);
    model.set_seams(table.s, table.t);
    const double S = std::max(std::abs(table.s.front()), std::abs(table.s.back()));
    const double T = std::max(std::abs(table.t.front()), std::abs(table.t.back()));
    model.set_sample_hints({S, T, {0}});
    return model;
}

DerivativeReport derivative_consistency(const NonlinearityModel& model, std::size_t samples, double step,
                                        const DerivativeCheckOptions& options) {
    if (samples < 1) fail(ErrorCode::BadParam, "derivative_consistency needs samples >= 1");
    if (!(step > 0.0)) fail(ErrorCode::BadParam, "derivative_consistency needs step > 0");

    const auto& hints = model.sample_hints();
    const auto s_range = options.abs_s_range.value_or(std::pair{0.0, hints.s_extent});
    const auto t_range = options.abs_t_range.value_or(std::pair{0.0, hints.t_extent});
    auto near_seam = [&](double v, const std::vector<double>& seams) {
        return std::any_of(seams.begin(), seams.end(), [&](double c) { return std::abs(v - c) <= 10.0 * step; });
    };
    auto draw = [](CounterRng& rng, std::pair<double, double> range) {
        const double a = rng.uniform(range.first, range.second);
        return rng.uniform() < 0.5 ? -a : a;
    };

    DerivativeReport report;
    CounterRng rng(options.seed, 0x6465726976ULL);
    // Bounded rejection: a sample box that lies entirely on seams terminates.
    for (std::size_t attempt = 0; report.samples_checked < samples && attempt < 50 * samples; ++attempt) {
        const std::size_t x = hints.vertices[rng.below(hints.vertices.size())];
        const double s = draw(rng, s_range);
        const double t = model.traits().t_independent ? 0.0 : draw(rng, t_range);
        if (near_seam(s, model.seams_s()) || (!model.traits().t_independent && near_seam(t, model.seams_t()))) {
            continue;
        }
        const double fd_s = (model.F(x, s + step, t) - model.F(x, s - step, t)) / (2.0 * step);
        const double fd_t = (model.F(x, s, t + step) - model.F(x, s, t - step)) / (2.0 * step);
        const double an_s = model.Fs(x, s, t);
        const double an_t = model.Ft(x, s, t);
        for (auto [fd, an] : {std::pair{fd_s, an_s}, std::pair{fd_t, an_t}}) {
            const double err = std::abs(fd - an);
            const double rel = err / std::max(1.0, std::abs(an));
            if (rel > report.max_discrepancy) {
                report.max_discrepancy = rel;
                report.worst_s = s;
                report.worst_t = t;
            }
            if (err > std::max(1e-6, 1e-4 * std::abs(an))) {
                report.passed = false;
                if (!options.report_only) {
                    std::ostringstream os;
                    os << "finite difference " << fd << " vs analytic " << an << " at (s, t) = (" << s << ", " << t
                       << ")";
                    fail(ErrorCode::InconsistentDerivative, os.str());
                }
            }
        }
        ++report.samples_checked;
    }
    return report;
}

}  // namespace graphvar
