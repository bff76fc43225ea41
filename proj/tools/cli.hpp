#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fraclim::cli {

// Runs one command line. Exit codes: 0 success, 1 verification failure,
// 2 usage or parse error, 3 resource guard.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fraclim::cli
