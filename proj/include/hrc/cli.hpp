#pragma once

#include <iosfwd>

namespace hrc {

/// Command-line entry point. Returns 0 on success, 1 on a planning failure
/// and 2 on bad input.
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hrc
