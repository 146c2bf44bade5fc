#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nnenc::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsage = 1,
    kDataError = 2,
    kDivergence = 3,
    kGradCheckFailed = 4,
};

/// Entry point of the `nnenc` tool. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nnenc::cli
