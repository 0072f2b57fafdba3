#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace edgeci::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kRuntimeFailure = 1, kUsageError = 2 };

/// Runs the command line `args` (without the program name). `in` backs
/// `--input -`; results without an explicit output path go to `out`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace edgeci::cli
