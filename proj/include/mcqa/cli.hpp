#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mcqa {

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFindings = 1;
inline constexpr int kExitFailure = 2;

/// Entry point of the `mcqa` tool; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mcqa
