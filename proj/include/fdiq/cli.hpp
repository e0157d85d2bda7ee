#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fdiq {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerifyFailed = 2;

/// Runs the command line in-process. Results go to `out` unless --out names a file.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace fdiq
