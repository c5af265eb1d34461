#pragma once

#include <iosfwd>

namespace hatchcycle {

/// Command-line entry point. Exit codes: 0 success, 1 usage error,
/// 2 configuration error, 3 numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hatchcycle
