#pragma once

#include <iosfwd>
#include <string>

namespace rkhs_embed::cli {

enum ExitCode : int { kSuccess = 0, kConfigError = 2, kNumericalFailure = 3 };

/// Parses the command line and runs the chosen subcommand. Never throws:
/// library exceptions become diagnostics on `err` and an exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rkhs_embed::cli
