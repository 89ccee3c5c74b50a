#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qvar::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitTheoremViolation = 3;

/// Entry point shared by the qvar binary and the tests. `args` excludes the
/// program name.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qvar::cli
