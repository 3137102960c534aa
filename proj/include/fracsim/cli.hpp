#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fracsim::cli {

enum ExitCode { Success = 0, ValidationFailure = 2, ComputationFailure = 3 };

// Runs one subcommand. Reports go to `out`, diagnostics to `err`; declared
// artifacts are written to disk. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace fracsim::cli
