#pragma once

#include <string>

#include "svlab/config.hpp"

namespace svlab {

// ---------------------------------------------------------------------------
// Experiment execution. run_experiment takes a validated config (after any
// CLI overrides), runs the named experiment, and returns the rendered
// output table plus a human-readable summary. Exit code 0 means every
// claim passed (or there were none); 2 means at least one claim failed.
// Errors (bad inputs, infeasible pairs, ground-truth mismatches) throw.
// ---------------------------------------------------------------------------

struct ExperimentOutcome {
  int exit_code = 0;
  std::string format;   // "csv" or "json"
  std::string table;    // the report document in that format
  std::string summary;  // stdout summary, one fact per line
};

ExperimentOutcome run_experiment(const ExperimentConfig& config);

}  // namespace svlab
