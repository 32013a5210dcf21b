#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "graphvar/error.hpp"

namespace graphvar::cli {

/// Exit codes, frozen for scripting.
enum Exit : int { Ok = 0, Io = 1, Validation = 2, Hypotheses = 3, FewerThanThree = 4 };

int exit_code_for(ErrorCode code);

/// Runs the command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace graphvar::cli
