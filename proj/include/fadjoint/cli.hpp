#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace fadjoint::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (program name excluded) and returns the exit
/// code. Subcommands: demo, gradcheck, train, fsym.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace fadjoint::cli
