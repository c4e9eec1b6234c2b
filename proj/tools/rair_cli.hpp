#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace rair::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kDataError = 2,
  kBackendError = 3,
};

/// Entry point of the `rair` tool. `args[0]` is the program name.
/// Subcommands: build-corpus, index, make-train-data, correct, evaluate.
int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace rair::cli
