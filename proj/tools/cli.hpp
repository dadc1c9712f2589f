#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ruinopt::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kConfigError = 2, kNumericError = 3 };

/// Runs one command line (without the program name). Results go to `out`
/// unless --out redirects them; diagnostics go to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace ruinopt::cli
