#pragma once

#include <iosfwd>

namespace kgrip {

enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitConfig = 2,
    kExitIo = 3,
    kExitSolver = 4,
};

/// Entry point of the kgrip command line (optimize | lrip | generate | bench).
/// Result documents go to --output or out; one-line reasons go to err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace kgrip
