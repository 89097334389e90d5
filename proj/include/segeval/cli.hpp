#pragma once

#include <string>
#include <vector>

namespace segeval {

// Entry point behind the segeval binary; exposed so tests can drive
// subcommands in-process. Exit codes: 0 success, 1 internal error,
// 2 user/input error.
int cli_main(int argc, const char* const* argv);
int cli_main(const std::vector<std::string>& args);

}  // namespace segeval
