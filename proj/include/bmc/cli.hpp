#pragma once

#include <string>
#include <vector>

namespace bmc {

// Exit codes: 0 success, 1 numerical acceptance failure, 2 usage/config error.
int run_cli(const std::vector<std::string>& args, std::string& out_text);

}  // namespace bmc
