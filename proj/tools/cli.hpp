#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nsdwt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs `dwt` with `args` (without the program name), writing tables and
/// results to `out` and diagnostics to `err`. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nsdwt::cli
