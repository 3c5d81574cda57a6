#pragma once

#include "levi/common.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace levi::cli {

enum ExitCode : int { kPass = 0, kViolation = 1, kUsage = 2, kDegenerate = 3 };

/// Runs one levi-lab invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "1", "-2.5", "3i", "1-2i", "0.5+1e-3i".
Complex parse_complex_literal(const std::string& text);

/// Comma-separated complex literals.
CVec parse_vector(const std::string& text);

} // namespace levi::cli
