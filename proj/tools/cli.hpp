#pragma once

#include <iosfwd>

namespace pjlab::cli {

enum ExitCode : int { kAllPass = 0, kFailure = 1, kUsage = 2, kPrecisionExhausted = 3 };

/// Entry point shared by the executable and the tests. Rows go to `out`
/// (unless --out names a file), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pjlab::cli
