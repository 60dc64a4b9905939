#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nbwalk {

inline constexpr const char* kVersion = "0.1.0";

// Exit status contract shared by every subcommand.
enum ExitCode : int {
    kExitOk = 0,
    kExitVerificationFailed = 1,
    kExitUsage = 2,
    kExitCapability = 3,
};

// Entry point behind the `nbwalk` binary. args excludes the program name.
// Data goes to `out` unless --out is given; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nbwalk
