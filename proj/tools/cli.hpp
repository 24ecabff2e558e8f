#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace pmhd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNotConverged = 3;

/// Environment variable holding the default worker count.
inline constexpr const char* kThreadsEnv = "PMHD_THREADS";

/// Entry point shared by the executable and the tests. `args` excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pmhd::cli
