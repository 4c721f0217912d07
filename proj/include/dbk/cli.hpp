#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dbk::cli {

enum ExitCode : int { kPass = 0, kCheckFailure = 1, kUsage = 2 };

/// Runs one subcommand. `args` excludes the program name. Reports go to
/// `out` unless --out names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "a..b" (unit steps from a up to b) or a comma list of reals.
std::vector<double> parse_grid(const std::string& text);

}  // namespace dbk::cli
