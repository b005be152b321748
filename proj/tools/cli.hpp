#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fsi::cli {

/// Exit codes: 0 success or true, 1 logical false, 2 usage or input error,
/// 3 internal error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace fsi::cli
