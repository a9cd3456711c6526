#pragma once

#include <iosfwd>

namespace lrcvar {

/// Command-line entry point. Returns 0 on success, 2 for invalid input and 3
/// for solver failures; never any other code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace lrcvar
