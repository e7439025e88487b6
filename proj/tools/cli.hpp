#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fractalmarch::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kInvalidScene = 2,
    kIo = 3,
};

/// Entry point shared by the executable and the tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fractalmarch::cli
