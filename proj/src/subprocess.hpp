#pragma once

#include <string>
#include <vector>

namespace facspeed::detail {

struct ProcessResult {
  int exit_code = -1;  // -1 when killed by a signal
  int signal = 0;
  std::string out;
  std::string err;
};

/// Runs argv[0] with the given arguments and captures stdout and stderr.
/// Throws std::system_error when the process cannot be spawned.
ProcessResult run_process(const std::vector<std::string>& argv);

}  // namespace facspeed::detail
