#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dce::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDomain = 2;

/// Runs one command line (args[0] is the program name) and returns the
/// process exit code. Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dce::cli
