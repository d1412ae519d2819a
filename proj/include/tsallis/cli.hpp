#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tsallis::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs one invocation. `args` excludes the program name. Results go to
/// `out` (or the --out file); failures print one line to `err` of the form
///   tsallis: usage-error: <message>     (exit 2)
///   tsallis: runtime-error: <message>   (exit 1)
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tsallis::cli
