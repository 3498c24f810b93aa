#pragma once

#include <ostream>

namespace fxlab {

/// Entry point of the `fxlab` tool. Returns 0 on success, 1 on usage errors
/// and 2 on runtime errors.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fxlab
