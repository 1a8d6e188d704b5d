#pragma once

#include <ostream>

namespace ratebench::cli {

// Process exit statuses.
enum ExitStatus : int {
  kSuccess = 0,       // ran and compliant
  kNonCompliant = 1,  // ran, but validation failed somewhere
  kUsageError = 2,    // bad flags, config or input files
  kExecFailure = 3,   // the run itself could not be carried out
};

// Entry point for every subcommand: run, score, bbv, perfplot, synth.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ratebench::cli
