#pragma once

// The two worked examples as ready-made problems, built through the same
// JSON reader the CLI uses so the reproduced problem can be written out and
// re-read unchanged.

#include <string_view>

#include "graphvar/io.hpp"

namespace graphvar::fixtures {

/// grid3x3, mu = 1, h1 = h2 = 9, p = 2, q = 3, m1 = m2 = 2, finite-mode
/// interval constants gamma = ((81/2)^{1/2}, 27^{1/3}),
/// delta = (4 * 15^{1/2}, 5 * (45/2)^{1/3}).
io::ProblemFile example_6_1(double r1 = 2.0, double r2 = 3.0);

/// lattice_ball(radius) with a zero ring around it (Dirichlet truncation), mu = 1, h = 4, p = 3, single equation,
/// locally-finite interval constants gamma = (16/3)^{1/3}, delta = 6 * 4^{1/3},
/// x0 = "0,0", h0 = 4, mu0 = 1.
io::ProblemFile example_6_2(double r = 5.0, int radius = 6);

/// name in {"example-6.1", "example-6.2"}; throws BadParam otherwise.
io::ProblemFile reproduce(std::string_view name);

/// Solver defaults for a problem file: start radii from the file.
SolverConfig solver_defaults(const io::ProblemFile& pf);

}  // namespace graphvar::fixtures
