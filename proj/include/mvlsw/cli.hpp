#pragma once

#include <iosfwd>

namespace mvlsw {

/// Runs one command-line invocation (argv[0] is the program name).
/// Subcommands: fixture, simulate, estimate, coherence, ci, bootstrap, plot.
/// Returns 0 on success, 2 for usage errors (usage text goes to `out`) and 1
/// for any other failure. Failures print one line `error: <Code>: <message>`
/// to `err`.
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mvlsw
