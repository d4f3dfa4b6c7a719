#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nlclaw::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name). Returns 0 on success, 1
/// when an asserted check fails or the computation breaks down, 2 on usage,
/// parse or configuration errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace nlclaw::cli
