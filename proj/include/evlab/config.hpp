#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

// Batch experiment configuration: parsed from a plain `key: value` file
// (comments with #, lists comma-separated) or assembled from CLI flags.

namespace evlab {

struct ExperimentConfig {
    std::string command;  // metric-suite | maximin | extend | pursuit |
                          // theorem1 | theorem2 | relaxed | fixture
    std::string fixture;  // fixture or system name
    std::string check;    // for command == fixture: which pipeline to run

    int horizon = 0;           // 0 = keep the fixture's grid
    int steps_per_unit = 0;

    double net_eps = 1e-3;
    double cluster_tol = 1e-6;
    double membership_tol = 1e-2;
    double agreement_tol = 2e-2;

    std::vector<double> eps_list;  // empty = fixture default
    std::vector<int> horizons;     // empty = fixture default

    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::string nu_file;  // extra nu measure for the relaxed pipeline
    bool dump_trajectories = false;
};

// Throws parse_error with the offending line number.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

// Tolerances positive, horizons ascending, command recognized.
void validate_config(const ExperimentConfig& cfg);

}  // namespace evlab
