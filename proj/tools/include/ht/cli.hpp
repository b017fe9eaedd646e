#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ht::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kInputError = 2 };

// args excludes the program name. Reports go to out, diagnostics to err.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ht::cli
