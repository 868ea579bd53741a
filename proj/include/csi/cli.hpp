#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace csi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInternalError = 2;

/// Runs one command. `args` excludes the program name.
/// Returns 0 on success, 1 on input errors, 2 on internal invariant failures.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace csi::cli
