#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hrcplan::cli {

/// Exit codes: 0 success, 1 domain failure (no plan, violation), 2 usage or input error.
/// `args` excludes the program name. Payload goes to `out`, commentary to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hrcplan::cli
