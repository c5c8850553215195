#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bc {

/// Exit codes: 0 success, 1 input error, 2 internal error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitInternal = 2;

/// Runs the command line; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bc
