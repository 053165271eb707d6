#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cli/run_config.hpp"

namespace qres::cli {

enum ExitCode : int {
  kExitSuccess = 0,
  kExitValidation = 1,
  kExitRuntime = 2,
  kExitPartialSweep = 3,
};

const std::vector<std::string>& subcommand_names();

// Each writes its files plus manifest.json into config.run_dir().
int run_gen_data(const RunConfig& config);
int run_train(const RunConfig& config);
int run_baseline(const RunConfig& config);
int run_sweep_qubits(const RunConfig& config);
int run_barren(const RunConfig& config);

/// Builds the RunConfig from key/values and dispatches. Configuration
/// problems return kExitValidation, failures during the run kExitRuntime;
/// the message goes to `err`.
int run_subcommand(const std::string& name, const KeyValues& values, std::ostream& err);

}  // namespace qres::cli
