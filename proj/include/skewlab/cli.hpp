#pragma once

// skewlab <command> --config <path> [--out <dir>] [--workers N] [--seed S]

#include <iosfwd>
#include <string>
#include <vector>

namespace skewlab::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kConfig = 2,
  kCondition = 3,
  kNonConvergence = 4,
};

/// Runs one command in-process; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int main(int argc, char** argv);

}  // namespace skewlab::cli
