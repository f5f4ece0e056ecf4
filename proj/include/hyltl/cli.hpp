#pragma once

#include <iosfwd>

namespace hyltl
{

/// Exit codes: 0 success or Verified, 2 Inconclusive, 1 error.
int run_cli( int argc, const char* const* argv, std::ostream& out, std::ostream& err );

} // namespace hyltl
