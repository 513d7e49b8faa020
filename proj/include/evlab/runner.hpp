#pragma once

#include <string>

#include "evlab/config.hpp"
#include "evlab/report.hpp"

// Executes one configured experiment: runs the named pipeline, writes the
// report file under the configured output directory, and reports the exit
// code (0 pass/agree, 2 disagreement; errors are thrown).

namespace evlab {

struct RunResult {
    int exit_code = 0;
    std::string report_path;
    Report report;
    std::string summary;  // one-line outcome for the console
};

RunResult run_experiment(const ExperimentConfig& cfg);

}  // namespace evlab
