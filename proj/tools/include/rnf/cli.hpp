#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rnf::cli {

enum ExitCode : int {
  kOk = 0,
  kNumericalFailure = 1,
  kUsageError = 2,
};

/// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace rnf::cli
