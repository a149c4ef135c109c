#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace battsched {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitInternal = 3,
};

/// Entry point behind the battsched executable. Subcommands: simulate,
/// compare, sweep-signals, sweep-params, gen-data.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace battsched
