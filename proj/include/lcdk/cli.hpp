#pragma once

#include <string>
#include <vector>

namespace lcdk::cli {

// Runs the command line given argv-style arguments (excluding the program
// name). Returns the process exit code: 0 all checks passed, 1 some check
// failed, 2 usage or input error.
int run(const std::vector<std::string>& args);

}  // namespace lcdk::cli
