#pragma once

#include <iosfwd>

namespace betadyn::cli {

// Runs one CLI invocation. Returns the process exit code: 0 on success,
// 1 on usage errors, 2 on domain errors (with a machine-readable error
// object on stdout).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace betadyn::cli
