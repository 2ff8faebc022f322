#pragma once

#include <ostream>

namespace selmer3 {

/// Exit codes: 0 success, 1 invariant violation, 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace selmer3
