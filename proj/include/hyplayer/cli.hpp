#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hyplayer/config.hpp"

namespace hyplayer {

/// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitDiagnostic = 1,   ///< a computed object violates a checked property
    kExitMissingFile = 2,
    kExitParse = 3,        ///< config syntax or command-line usage
    kExitValidation = 4,
    kExitSolver = 5,       ///< solver breakdown or non-convergence
    kExitIo = 6,
};

const std::vector<std::string>& subcommand_names();

/// Runs one pipeline and writes its artifacts under cfg.output.directory.
/// Progress goes to `log`. Returns an ExitCode.
int run_subcommand(const std::string& name, const RunConfig& cfg, std::ostream& log);

/// Full command line: `hyplayer <subcommand> [--config PATH] [--out DIR] [--gamma X]
/// [--grid-scale K]`. Worker count for `sweep` comes from HYPLAYER_WORKERS.
int run_cli(int argc, char** argv);

}  // namespace hyplayer
