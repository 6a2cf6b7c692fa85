#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qbell::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kSuccess = 0,
  kInputError = 1,
  kCertificationFailure = 2,
  kBoundViolation = 3,
};

/// Runs the tool with argv-style arguments (args[0] is the program name).
/// Reports go to `out` (or the --out file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qbell::cli
