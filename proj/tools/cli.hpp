#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stgain::cli {

// Runs the command line `stgain <args...>` and returns the process exit
// code: 0 success, 1 finished with warnings, 2 input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stgain::cli
