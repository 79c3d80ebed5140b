#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kahler::cli {

enum ExitCode : int { kSuccess = 0, kInputError = 1, kRuntimeError = 2 };

inline constexpr double kDefaultDt = 1e-3;
inline constexpr int kDefaultSamples = 50;
inline constexpr double kDefaultTol = 1e-8;
inline constexpr unsigned long long kDefaultSeed = 0;
inline constexpr double kDefaultCheckT1 = 10.0;

/// args excludes the program name. Returns 0, 1 or 2.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kahler::cli
