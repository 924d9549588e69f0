#pragma once

#include <string>
#include <vector>

namespace sgebench {

// Entry point shared by the binary and the tests. Exit code 0 on success,
// 1 on any instance-level failure, 2 on usage errors.
int run_cli(const std::vector<std::string>& args);

}  // namespace sgebench
