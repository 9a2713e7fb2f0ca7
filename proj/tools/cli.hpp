#pragma once

#include <string>
#include <vector>

namespace lsopr {

/// Command-line entry point. Subcommands: solve, reduce, bound, gen, verify.
/// Exit codes: 0 success, 1 runtime failure, 2 infeasible, 3 iteration limit,
/// 64 usage error.
int run_cli(const std::vector<std::string>& args);

}  // namespace lsopr
