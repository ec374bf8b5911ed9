#pragma once

#include <iosfwd>
#include <string>

namespace poemdiv {

/// Full command-line front end: subcommands prep, analyze, rank, embed.
/// Returns the process exit code: 0 success, 2 input validation failure,
/// 3 internal error. Diagnostics go to `err`; data and machine-readable
/// error JSON go to `out` or to the configured output files.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace poemdiv
