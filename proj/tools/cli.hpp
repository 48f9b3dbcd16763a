#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace undesign::cli {

// Exit codes: 0 ok, 1 usage, 2 data error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace undesign::cli
