#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace readbench {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitUpstream = 3 };

/// Runs the command line `args` (without the program name). Never throws;
/// errors are reported on `err` and mapped to an exit code.
int run_cli(std::vector<std::string> args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace readbench
