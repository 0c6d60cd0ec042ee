#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace emg::cli {

// Exit codes: 0 success, 1 runtime or data error, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace emg::cli
