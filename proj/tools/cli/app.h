#ifndef AGGDELAY_TOOLS_CLI_APP_H_
#define AGGDELAY_TOOLS_CLI_APP_H_

#include <ostream>
#include <string>
#include <vector>

namespace aggdelay::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitNotConverged = 3,
  kExitSimulationError = 4,
};

// Entry point behind the aggdelay binary. args[0] is the program name.
// Data goes to `out` (or the configured output path), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace aggdelay::cli

#endif  // AGGDELAY_TOOLS_CLI_APP_H_
