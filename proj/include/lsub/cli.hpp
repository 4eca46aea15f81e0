#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lsub {

inline constexpr const char* kToolVersion = "0.1.0";

/// Command-line entry point. `args` excludes the program name. Writes the
/// report to `out` and diagnostics to `err`; returns 0 when every check
/// passes, 1 when one fails and 2 on usage or configuration errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lsub
