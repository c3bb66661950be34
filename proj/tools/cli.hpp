#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bcsdn::cli {

enum ExitCode : int { ok = 0, invariant_violation = 1, input_error = 2, conformance_false = 3 };

/// Entry point for the `bcsdn` tool. Arguments exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Number formatting used in every CSV: `precision` significant digits,
/// shortest form, no negative zero.
std::string format_number(double v, int precision);

}  // namespace bcsdn::cli
