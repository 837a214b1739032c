#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace orthoplanar::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (program name excluded). Subcommands:
/// simulate, analytic, verify. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "a,b,c" or "start:stop:count" (inclusive, evenly spaced).
/// Throws std::invalid_argument.
std::vector<double> parse_list(const std::string& text);

}  // namespace orthoplanar::cli
