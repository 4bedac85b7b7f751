#pragma once

#include <iosfwd>

namespace solitonsphere {

// Parses argv and runs one subcommand. Returns the process exit code:
// 0 success, 1 parameter/validation, 2 numerical, 3 I/O.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace solitonsphere
