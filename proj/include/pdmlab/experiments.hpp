#pragma once

#include "pdmlab/config.hpp"

#include <string>
#include <vector>

namespace pdmlab {

/// Names accepted by run_experiment, in documentation order.
const std::vector<std::string>& experiment_names();

/// Runs one named experiment and writes its CSV files plus a manifest.csv
/// (file, schema_version) under out_dir, creating the directory if needed.
/// Identical configs produce byte-identical files.
///
/// Throws std::invalid_argument for an unknown name or a config the
/// experiment cannot use, std::runtime_error when the run fails after
/// starting (divergent simulation, flagged invariant violation, unwritable
/// output). Outputs written before a flagged violation are kept.
void run_experiment(const std::string& name, const ExperimentConfig& cfg,
                    const std::string& out_dir);

} // namespace pdmlab
