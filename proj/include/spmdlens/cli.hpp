#pragma once

#include <iosfwd>

namespace spmdlens {

/// Process exit statuses of the command-line tool.
enum ExitStatus : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitIo = 3,
    kExitParse = 4,
    kExitValidation = 5,
    kExitAnalysis = 6,
};

/// Runs one command line; reports go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace spmdlens
