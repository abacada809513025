#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lwcov::cli {

/// Runs the lwcov command line with `args` (args[0] is the program name).
/// Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lwcov::cli
