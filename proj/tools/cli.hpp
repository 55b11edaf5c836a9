#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fringe::cli {

/// Exit codes: 0 success, 1 I/O failure, 2 invalid input, config or stage order.
enum ExitCode : int { kOk = 0, kIoError = 1, kInvalid = 2 };

/// Runs one command; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fringe::cli
