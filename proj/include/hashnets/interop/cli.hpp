#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hashnets::interop {

enum ExitCode { exit_ok = 0, exit_diagnostics = 1, exit_internal = 2 };

// Runs one `hashnets` command line; args[0] is the program name.
[[nodiscard]] int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hashnets::interop
