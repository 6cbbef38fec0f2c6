#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace turbmit::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kDataError = 2,
  kNumericError = 3,
};

// Parses `args` (args[0] is the program name) and runs the selected
// subcommand. Regular output goes to `out`; failures are reported as one
// `error: <category>: <detail>` line on `err`.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err);

}  // namespace turbmit::cli
