#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace plcc::cli {

/// Exit codes of the front end.
enum ExitCode : int {
    kOk = 0,
    kCheckFailed = 1,
    kNonConvergence = 2,
    kInvalidSpec = 3,
};

/**
 * Runs one subcommand (solve-plus, solve-minus, torsion, eigen, bounds, bifurcation,
 * lambda-star, verify). Tabular results go to `out`, diagnostics to `err`; solution
 * fields go to --output when given, else to `out`.
 */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace plcc::cli
