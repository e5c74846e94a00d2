#pragma once

#include <string>
#include <vector>

namespace kza {

// Executes one CLI run; returns the process exit code
// (0 pass, 1 fail, 2 non-convergence, 3 precondition/config error).
int run_cli(const std::vector<std::string>& args);

}  // namespace kza
