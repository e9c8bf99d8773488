#pragma once

#include <string>
#include <vector>

namespace rgw::cli {

// Runs one command line (without the program name). Returns the exit code:
// 0 success, 2 validation failure, 3 solver failure, 4 I/O.
int run(const std::vector<std::string>& args);

std::string sha256_hex(const std::string& data);

}  // namespace rgw::cli
