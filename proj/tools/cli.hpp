#pragma once

#include <ostream>

namespace gex::cli {

// Exit codes: 0 success, 1 error or bad usage, 2 validation did not pass.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gex::cli
