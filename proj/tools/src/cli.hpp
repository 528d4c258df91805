#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mrfcp::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kDataError = 3,
  kNumericalError = 4,
};

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "MRFCP_OUTPUT_DIR";

/// Parses and runs one command line (args[0] is the program name). Messages go
/// to `out` and `err`; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mrfcp::cli
