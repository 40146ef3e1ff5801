#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace magswim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAnalysisFailure = 1;
inline constexpr int kExitUsage = 2;

/// Worker count for sweeps; a positive integer overrides the processor count.
inline constexpr const char* kWorkersEnv = "MAGSWIM_WORKERS";

/// Runs one subcommand. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace magswim
