#ifndef FADECODE_CLI_HPP
#define FADECODE_CLI_HPP

#include <string>
#include <vector>

namespace fadecode {

// exit codes: 0 success, 2 usage/config error, 3 runtime/training failure
int run_cli(const std::vector<std::string>& args);

}  // namespace fadecode

#endif
