#pragma once

// Command-line front end. run() parses argv-style arguments (without the
// program name), writes results to `out` and diagnostics to `err`, and
// returns the process exit code.

#include <iosfwd>
#include <string>
#include <vector>

namespace hoplr::cli {

inline constexpr const char* kVersion = "1.0.0";

/// 0 on success, 1 on a runtime or domain error, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hoplr::cli
