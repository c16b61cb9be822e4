#pragma once

#include <ostream>

namespace maghull::cli {

/// Exit status: 0 success, 2 invalid usage or input, 1 numeric failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace maghull::cli
