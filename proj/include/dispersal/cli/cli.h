#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dispersal::cli {

/// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kRefused = 1;  // precondition failure or solver refusal
inline constexpr int kUsage = 2;    // bad arguments or malformed config

/// Runs one command (`args` excludes the program name) writing to the given streams.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dispersal::cli
