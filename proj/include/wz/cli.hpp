#pragma once

#include <string>
#include <vector>

namespace wz {

/// Entry point of the command-line front end (argv without the program
/// name). Returns the process exit code: 0 success, 1 validation error,
/// 2 numerical failure.
int cli_main(const std::vector<std::string>& args);

}  // namespace wz
