#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace softppg::cli {

// Runs the softppg command line. args excludes the program name. Returns the
// process exit status: 0 success, 2 invalid input format, 3 invalid config,
// 4 insufficient data, 1 anything else.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace softppg::cli
