#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ptq::cli {

/// Process exit codes.
enum ExitCode : int {
    exit_ok = 0,
    exit_verification_failed = 1,
    exit_internal = 2,
    exit_usage = 64,
};

/// Runs the command line (arguments without the program name) and returns the
/// exit code. Results go to `out` unless --output names a file; diagnostics go
/// to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "%.17g" formatting (precision overridable through PTQ_PRECISION, 1..17);
/// "nan" and "inf" for non-finite values.
std::string format_number(double value);

} // namespace ptq::cli
