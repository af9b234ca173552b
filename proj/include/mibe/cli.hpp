#pragma once

#include <string>
#include <vector>

namespace mibe {

// Exit statuses: 0 success, 1 cryptographic failure (rejection, failed
// validation or verification), 2 usage, 3 I/O or protocol trouble.
int run_cli(const std::vector<std::string>& args);

}  // namespace mibe
