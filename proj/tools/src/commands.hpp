#pragma once

#include <iosfwd>

namespace simcorr::cli {

enum ExitCode : int { ok = 0, internal_error = 1, usage_error = 2, data_error = 3, numerical_error = 4 };

/// Runs the command line. Documents go to `out` unless --output is given; messages go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace simcorr::cli
