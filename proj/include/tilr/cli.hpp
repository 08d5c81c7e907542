#pragma once

#include <iosfwd>

namespace tilr {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Entry point of the `tilr` tool: gen, mine, train, eval, convert, inspect.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tilr
