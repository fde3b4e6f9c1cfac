#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace relcpd::cli {

/// Exit codes of the relcpd tool.
enum ExitCode : int {
    kSuccess = 0,
    kUsage = 1,
    kDataError = 2,
    kDegenerate = 3,  ///< degenerate statistic under --strict
};

/// Runs the tool on `args` (without the program name), writing results to
/// `out` and diagnostics to `err`. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace relcpd::cli
