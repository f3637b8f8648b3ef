#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tentpitch {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the command-line tool. `args` excludes the program name.
/// Returns 0 on success, 1 on validation or verification failure and 2 on
/// usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tentpitch
