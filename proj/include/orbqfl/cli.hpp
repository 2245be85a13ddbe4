#pragma once

#include <iosfwd>
#include <string_view>

namespace orbqfl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitConfig = 4;

std::string_view version();

/// Entry point of the `orbqfl` tool. Data and reports go to `out`,
/// diagnostics to `err`; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace orbqfl::cli
