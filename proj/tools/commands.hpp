#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ics::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kData = 3,
  kInternal = 4,
};

/// Runs the `ics` command line with args[0] as the program name. Normal
/// output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace ics::cli
