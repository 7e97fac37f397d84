#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wildsimp {

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitTargetUnreached = 2 };

/// Entry point of the `wildsimp` tool. `args` excludes the program name.
/// Reports go to `out` unless --report names a file; diagnostics go to `err`.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wildsimp
