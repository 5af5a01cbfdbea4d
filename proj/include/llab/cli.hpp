#pragma once

// The llab command-line front end, callable in-process for tests.

#include <ostream>

namespace llab {

enum ExitCode : int { exit_ok = 0, exit_input = 2, exit_conformance = 3, exit_invariant = 4 };

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace llab
