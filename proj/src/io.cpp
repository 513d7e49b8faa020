#include "evlab/io.hpp"

#include <fstream>

#include "evlab/errors.hpp"
#include "evlab/numfmt.hpp"

namespace evlab {

void write_trajectory_csv_file(const std::filesystem::path& path, const Trajectory& x) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write " + path.string());
    write_csv(out, x);
}

Trajectory read_trajectory_csv_file(const std::filesystem::path& path, int steps_per_unit) {
    std::ifstream in(path);
    if (!in) throw error("cannot open " + path.string());
    return read_csv(in, steps_per_unit);
}

void write_bundle_dump(const std::filesystem::path& dir, const Bundle& b) {
    std::filesystem::create_directories(dir);
    std::ofstream manifest(dir / "manifest.txt", std::ios::binary);
    if (!manifest) throw error("cannot write " + (dir / "manifest.txt").string());
    manifest << "evlab-bundle v1\n";
    manifest << "label: " << b.label() << '\n';
    manifest << "horizon: " << b.grid().horizon << '\n';
    manifest << "steps_per_unit: " << b.grid().steps_per_unit << '\n';
    manifest << "dim: " << b.dim() << '\n';
    manifest << "members: " << b.size() << '\n';
    for (std::size_t i = 0; i < b.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "traj_%04zu.csv", i);
        manifest << "file: " << name << '\n';
        write_trajectory_csv_file(dir / name, b[i]);
    }
}

}  // namespace evlab
