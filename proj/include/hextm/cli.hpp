#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hextm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Runs one invocation. args excludes the program name. Results go to out,
// logs and diagnostics to err; standard input is read from in for --board -.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace hextm::cli
