#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sts::cli {

enum ExitCode : int {
    kSuccess = 0,
    kValidationFailed = 1,
    kUsage = 2,
    kIo = 3,
};

/// Runs the command line `args` (without the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace sts::cli
