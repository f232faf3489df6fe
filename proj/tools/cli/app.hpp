#pragma once
// Argument parsing for the hmsvm executable. Settings resolve as defaults,
// then the --config file, then flags given on the command line.
#include <iosfwd>
#include <string>
#include <vector>

namespace hmsvm::cli {

/// `args` excludes the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hmsvm::cli
