#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mrproxy {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  // expectation failed, invalid instrument, all replicates failed
inline constexpr int kExitUsage = 2;   // bad arguments, unreadable or malformed input

// Runs one `mrproxy` invocation; args excludes the program name.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mrproxy
