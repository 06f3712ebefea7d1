#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gridsched::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Entry point behind the gridsched executable. `args` excludes the program
/// name. Machine output and the summary line go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gridsched::cli
