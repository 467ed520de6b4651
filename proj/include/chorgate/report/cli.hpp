#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chorgate::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int { kValid = 0, kInvalid = 1, kInputError = 2 };

/// Runs `chorgate <validate|paths|lint> ...`. args[0] is the program name.
/// Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chorgate::cli
