#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace symart::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitFault = 2;

/// Entry point shared by the executable and the tests. args excludes the
/// program name. Returns 0 on success, 1 for invalid input or a failed
/// verification, 2 for runtime faults.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace symart::cli
