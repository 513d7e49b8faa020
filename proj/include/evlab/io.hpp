#pragma once

#include <filesystem>

#include "evlab/bundle.hpp"

namespace evlab {

void write_trajectory_csv_file(const std::filesystem::path& path, const Trajectory& x);
Trajectory read_trajectory_csv_file(const std::filesystem::path& path, int steps_per_unit);

// A directory of per-member CSVs plus a manifest listing the label and grid.
void write_bundle_dump(const std::filesystem::path& dir, const Bundle& b);

}  // namespace evlab
