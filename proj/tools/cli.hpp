#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace iset::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr unsigned long long kDefaultSeed = 20160101;

enum ExitCode : int { kOk = 0, kUsage = 2, kDomain = 3, kResource = 4 };

/// Runs the command line `args` (without the program name), writing results
/// to `out` and diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace iset::cli
