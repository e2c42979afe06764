#pragma once

#include "plg/error.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace plgsim {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitSimulation = 2,
    kExitUsage = 3,
};

int exit_code_for(plg::Errc code) noexcept;

/// Runs one command line (without the program name). Everything the
/// command prints goes to `out`/`err`; files go under --out.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace plgsim
