#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace loewner::cli {

/// Exit codes of every command.
enum ExitCode : int { kPass = 0, kViolation = 1, kUsage = 2 };

/// Runs the `loewner` command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace loewner::cli
