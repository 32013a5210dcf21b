#include "graphvar/fixtures.hpp"

#include <cmath>

namespace graphvar::fixtures {

io::ProblemFile example_6_1(double r1, double r2) {
    const double p = 2.0, q = 3.0, h = 9.0;
    const double gamma1 = std::sqrt(81.0 / 2.0), gamma2 = std::cbrt(27.0);
    const double level = std::pow(gamma1, p) + std::pow(gamma2, q);
    // omega_i are the box bounds of the finite-graph interval (mu_min = 1).
    const double omega1 = std::pow(p * level, 1.0 / p) / std::pow(h, 1.0 / p);
    const double omega2 = std::pow(q * level, 1.0 / q) / std::pow(h, 1.0 / q);
    const double delta1 = 4.0 * std::sqrt(15.0), delta2 = 5.0 * std::cbrt(45.0 / 2.0);
    io::json j = {
        {"graph", {{"builtin", "grid3x3"}}},
        {"m1", 2},
        {"m2", 2},
        {"p", p},
        {"q", q},
        {"h1", h},
        {"h2", h},
        {"scalar", false},
        {"nonlinearity",
         {{"builtin", "example_6_1"}, {"params", {{"omega1", omega1}, {"omega2", omega2}, {"r1", r1}, {"r2", r2}}}}},
        {"interval", {{"mode", "finite"}, {"gamma", {gamma1, gamma2}}, {"delta", {delta1, delta2}}}},
        {"start_radius", {1.0 + delta1, 1.0 + delta2}},
    };
    return io::problem_from_json(j);
}

io::ProblemFile example_6_2(double r, int radius) {
    const double p = 3.0, h0 = 4.0, mu0 = 1.0;
    const double gamma = std::cbrt(16.0 / 3.0);
    const double omega = std::pow(h0 * mu0, -1.0 / p) * std::pow(p * std::pow(gamma, p), 1.0 / p);
    const double delta = 6.0 * std::cbrt(4.0);
    io::json j = {
        {"graph", {{"builtin", "lattice_ball"}, {"radius", radius}}},
        {"m1", 1},
        {"p", p},
        {"h1", h0},
        {"scalar", true},
        {"nonlinearity", {{"builtin", "example_6_2"}, {"params", {{"omega", omega}, {"r", r}, {"x0", "0,0"}}}}},
        {"interval",
         {{"mode", "locally_finite"}, {"gamma", {gamma}}, {"delta", {delta}}, {"x0", "0,0"}, {"h0", h0}, {"mu0", mu0}}},
        {"start_radius", {1.0 + delta}},
        {"truncation", "dirichlet"},
    };
    return io::problem_from_json(j);
}

io::ProblemFile reproduce(std::string_view name) {
    if (name == "example-6.1") return example_6_1();
    if (name == "example-6.2") return example_6_2();
    fail(ErrorCode::BadParam, "unknown reproduction '" + std::string(name) + "' (use example-6.1 or example-6.2)");
}

SolverConfig solver_defaults(const io::ProblemFile& pf) {
    SolverConfig c;
    if (pf.start_radius) {
        c.start_radius_u = pf.start_radius->first;
        c.start_radius_v = pf.start_radius->second;
    }
    return c;
}

}  // namespace graphvar::fixtures
