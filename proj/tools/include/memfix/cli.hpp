// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace memfix::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kParseFailure = 2,
    kIterationCap = 3,
    kValidityViolation = 4,
    kOracleMismatch = 5,
};

/// Runs the `memfix` command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace memfix::cli
