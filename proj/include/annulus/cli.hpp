#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace annulus::cli {

/// Exit codes: 0 success, 1 usage or validation error, 2 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

/// Runs one command line (arguments after the program name). "-" or an omitted
/// input reads from `in`; results go to `out` unless -o is given, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace annulus::cli
