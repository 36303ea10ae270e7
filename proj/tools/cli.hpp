#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mdpavg {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCapacity = 3;

struct CliStreams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  /// ANSI colour on PASS/FAIL tokens.
  bool color = false;
};

/// Runs one command line (args excludes the program name) and returns the
/// exit code: 0 all checks pass, 1 some check failed, 2 usage, input or
/// domain error, 3 capacity guard.
int run_cli(const std::vector<std::string>& args, CliStreams io);

}  // namespace mdpavg
