#pragma once

#include <iosfwd>

namespace gfnet {

/// Entry point of the `gfnet` tool. Returns 0 on success, 1 on a numerical
/// failure and 2 on a usage or configuration error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gfnet
