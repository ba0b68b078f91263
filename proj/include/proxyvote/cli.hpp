#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace proxyvote::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kInvalid = 2,      ///< parse, validation or configuration error
    kPropagation = 3,  ///< stranded trust, no convergence, singular system
};

/// Runs one command line (args excludes the program name). Normal output goes
/// to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace proxyvote::cli
