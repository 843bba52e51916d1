#pragma once

// The prony command-line tool as a library: every subcommand can be run
// in-process with its own output streams.

#include <iosfwd>
#include <string>
#include <vector>

namespace prony::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitEmpty = 3;
inline constexpr int kExitPrecondition = 4;

/// Runs the tool with args (program name excluded). Data goes to out, or to
/// the --out file; diagnostics go to err. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest round-trip decimal form; "nan", "inf" and "-inf" otherwise.
std::string format_double(double v);

}  // namespace prony::cli
