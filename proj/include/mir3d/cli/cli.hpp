#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mir3d::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kIo = 2 };

/// Runs one command line (`args[0]` is the program name). Results go to
/// `out`, diagnostics to `err`. Returns 0 on success, 1 on validation or
/// usage errors, 2 on I/O and format errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mir3d::cli
