#pragma once

#include <iosfwd>

namespace nhl::cli {

/// Exit codes: 0 success, 1 usage, 2 validation, 3 computation, 4 I/O.
enum ExitCode : int { kOk = 0, kUsage = 1, kValidation = 2, kComputation = 3, kIo = 4 };

/// Runs one `nhl` invocation. Reports go to `out` (or the --output file),
/// diagnostics and summaries to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nhl::cli
