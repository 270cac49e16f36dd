#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sfr {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes of the command-line frontend.
enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,   ///< bad flags, unreadable or malformed input
    kExitComputation = 2,  ///< numerical failure during estimation
};

/// Runs one invocation. `args` excludes the program name. Data goes to
/// `out` (or the --output file); diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sfr
