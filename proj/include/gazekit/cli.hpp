#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gazekit {

/// Exit statuses of the command-line tool.
enum ExitStatus : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitIo = 3 };

/// Entry point of the `gazekit` executable. `args` excludes the program
/// name. Diagnostics go to `err` as a single line; `in` feeds raw-frame mode.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace gazekit
