#pragma once

#include <string>
#include <vector>

namespace modecast::cli {

/// Runs one subcommand. Exit codes: 0 success, 1 usage error, 2 data error,
/// 3 numerical failure. Used by main() and called directly by the tests.
int run(const std::vector<std::string>& args);

}  // namespace modecast::cli
