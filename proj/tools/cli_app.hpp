#pragma once

#include <ostream>

namespace pigeonhole {

/// Exit codes returned by run_cli.
enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kInvalidInput = 2, kInfeasible = 3 };

/// Entry point of the `pigeonhole` tool; `out` receives data, `err` diagnostics.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pigeonhole
