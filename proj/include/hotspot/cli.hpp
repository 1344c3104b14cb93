#pragma once

#include <iosfwd>

namespace hotspot {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitBadArguments = 2;
inline constexpr int kExitDataError = 3;
inline constexpr int kExitPrecondition = 4;

// Entry point of the `hotspot` executable: subcommands cluster, evaluate,
// select-k, bench and export.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hotspot
