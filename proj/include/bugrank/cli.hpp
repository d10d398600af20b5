#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bugrank {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitInternal = 3 };

/// Entry point of the bugrank command; args excludes the program name.
/// Machine-readable output goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bugrank
