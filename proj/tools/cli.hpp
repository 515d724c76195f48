#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pings::cli {

// Exit codes: 0 success, 1 runtime failure, 2 usage error. Diagnostics go
// to `err` as one line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pings::cli
