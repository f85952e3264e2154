#pragma once

#include <ostream>

namespace summakit::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    /// Confident counterexample or numeric failure.
    kExitFailure = 1,
    /// Invalid input: bad flags, config, CSV or a failed hypothesis certificate.
    kExitInvalid = 2,
};

/// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace summakit::cli
