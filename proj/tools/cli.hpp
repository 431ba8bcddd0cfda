#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace idiomine::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kDomainError = 1;
inline constexpr int kUsageError = 2;

// Runs the command line `args` (args[0] is the program name), writing
// regular output to `out` and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace idiomine::cli
