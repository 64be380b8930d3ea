#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace germforge {

// Runs one germforge command line (without the program name). Returns the
// process exit code: 0 success, 2 for domain outcomes such as NoSolution or
// NotBoundary, 1 for errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace germforge
