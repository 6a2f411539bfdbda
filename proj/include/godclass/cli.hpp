#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace godclass::cli {

enum ExitCode : int {
  kSuccess = 0,
  kValidationFailure = 1,
  kUsageError = 2,
  kIoError = 3,
};

// Runs the command line `args` (args[0] is the program name). Reports go to
// `out` unless --out names a directory; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace godclass::cli
