#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace divcurve::cli {

// Exit codes: 0 success, 1 usage, 2 input/validation, 3 mathematical
// degeneracy, 4 IO.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitDegenerate = 3;
inline constexpr int kExitIo = 4;

/// Runs `divcurve` with args (args[0] is the program name). Output is
/// buffered per command, so a failing command writes nothing to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace divcurve::cli
