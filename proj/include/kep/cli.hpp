#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kep::cli {

enum ExitCode { kOk = 0, kFailure = 1, kConfigError = 2, kTimeout = 3, kIoError = 4 };

/// Runs `kep <command> ...`. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kep::cli
