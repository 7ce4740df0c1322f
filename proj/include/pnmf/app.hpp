#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pnmf::app {

// Exit statuses of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitDegenerate = 2;

/// Runs the `pnmf` command line (args excludes the program name). Messages
/// go to `err`, help text to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pnmf::app
