#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace imitation {

/// Stable exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCounterexample = 1;
inline constexpr int kExitUsage = 2;
/// An internal consistency check failed (a bug, never an expected outcome).
inline constexpr int kExitInternal = 3;

/// Entry point behind the `imitation` binary. `args` excludes argv[0].
/// Subcommands: analyze, classify, simulate, exploit, generate, verify,
/// serve. Global flags: --json, --precision N, --seed N, --config FILE.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace imitation
