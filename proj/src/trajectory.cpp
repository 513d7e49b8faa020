#include "evlab/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "evlab/errors.hpp"
#include "evlab/kernels.hpp"
#include "evlab/numfmt.hpp"

namespace evlab {

TimeGrid make_grid(int horizon, int steps_per_unit) {
    if (horizon < 1) throw std::invalid_argument("grid horizon must be >= 1");
    if (steps_per_unit < 1) throw std::invalid_argument("steps_per_unit must be >= 1");
    return TimeGrid{horizon, steps_per_unit};
}

Trajectory::Trajectory(TimeGrid grid, int dim)
    : grid_(grid), dim_(dim),
      comps_(static_cast<std::size_t>(dim) * grid.node_count(), 0.0) {
    if (dim < 1) throw std::invalid_argument("trajectory dimension must be >= 1");
}

Trajectory Trajectory::sampled(TimeGrid grid, int dim,
                               const std::function<void(int, double, std::span<double>)>& fill) {
    Trajectory x(grid, dim);
    std::vector<double> v(static_cast<std::size_t>(dim));
    for (int k = 0; k < grid.node_count(); ++k) {
        fill(k, grid.time_at(k), v);
        for (int j = 0; j < dim; ++j) x.at(k, j) = v[static_cast<std::size_t>(j)];
    }
    return x;
}

Trajectory Trajectory::constant(TimeGrid grid, double value) {
    return constant(grid, std::span<const double>(&value, 1));
}

Trajectory Trajectory::constant(TimeGrid grid, std::span<const double> value) {
    Trajectory x(grid, static_cast<int>(value.size()));
    for (int j = 0; j < x.dim(); ++j)
        for (int k = 0; k < grid.node_count(); ++k)
            x.at(k, j) = value[static_cast<std::size_t>(j)];
    return x;
}

std::span<const double> Trajectory::component(int j) const {
    return {comps_.data() + static_cast<std::size_t>(j) * nodes(),
            static_cast<std::size_t>(nodes())};
}

double Trajectory::value_at(double t, int comp) const {
    const double tc = std::clamp(t, 0.0, static_cast<double>(grid_.horizon));
    const double pos = tc * grid_.steps_per_unit;
    const int k = std::min(static_cast<int>(pos), grid_.node_count() - 2);
    const double frac = pos - k;
    return at(k, comp) + frac * (at(k + 1, comp) - at(k, comp));
}

namespace {

void require_compatible(const Trajectory& x, const Trajectory& y) {
    if (!x.grid().same_step(y.grid()))
        throw incompatible_error("trajectories use different grid steps");
    if (x.dim() != y.dim())
        throw incompatible_error("trajectories have different dimensions");
}

}  // namespace

double sup_distance(const Trajectory& x, const Trajectory& y, int horizon) {
    require_compatible(x, y);
    if (horizon < 1 || horizon > std::min(x.grid().horizon, y.grid().horizon))
        throw std::invalid_argument("sup_distance horizon outside both grids");
    const std::size_t nodes =
        static_cast<std::size_t>(horizon) * x.grid().steps_per_unit + 1;
    return std::sqrt(kernels::max_sq_dist(x.data(), y.data(), nodes,
                                          static_cast<std::size_t>(x.dim()),
                                          x.stride(), y.stride()));
}

double co_metric(const Trajectory& x, const Trajectory& y) {
    require_compatible(x, y);
    const int horizon = std::min(x.grid().horizon, y.grid().horizon);
    const int m = x.grid().steps_per_unit;
    // Running max over integer-horizon segments; segment n covers nodes
    // ((n-1)m, nm], with node 0 folded into the first one.
    double running_sq = 0.0;
    double total = 0.0;
    for (int n = 1; n <= horizon; ++n) {
        const std::size_t begin = static_cast<std::size_t>(n - 1) * m + (n == 1 ? 0 : 1);
        const std::size_t end = static_cast<std::size_t>(n) * m;
        const double seg = kernels::max_sq_dist(x.data() + begin, y.data() + begin,
                                                end - begin + 1,
                                                static_cast<std::size_t>(x.dim()),
                                                x.stride(), y.stride());
        running_sq = std::max(running_sq, seg);
        total += std::ldexp(std::min(1.0, std::sqrt(running_sq)), -n);
    }
    return total;
}

Trajectory restrict_to(const Trajectory& x, int horizon) {
    if (horizon < 1 || horizon > x.grid().horizon)
        throw std::invalid_argument("restriction horizon outside the grid");
    Trajectory out(TimeGrid{horizon, x.grid().steps_per_unit}, x.dim());
    for (int j = 0; j < x.dim(); ++j)
        for (int k = 0; k < out.nodes(); ++k) out.at(k, j) = x.at(k, j);
    return out;
}

void write_csv(std::ostream& out, const Trajectory& x) {
    out << 't';
    for (int j = 1; j <= x.dim(); ++j) out << ",x" << j;
    out << '\n';
    for (int k = 0; k < x.nodes(); ++k) {
        out << format_number(x.grid().time_at(k));
        for (int j = 0; j < x.dim(); ++j) out << ',' << format_number(x.at(k, j));
        out << '\n';
    }
}

Trajectory read_csv(std::istream& in, int steps_per_unit) {
    std::string line;
    if (!std::getline(in, line)) throw parse_error("empty trajectory csv", 1);
    int dim = 0;
    for (char c : line)
        if (c == ',') ++dim;
    if (dim < 1) throw parse_error("csv header has no components", 1);

    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            const auto v = parse_number(cell);
            if (!v) throw parse_error("bad number '" + cell + "'", lineno);
            row.push_back(*v);
        }
        if (static_cast<int>(row.size()) != dim + 1)
            throw parse_error("row width does not match header", lineno);
        rows.push_back(std::move(row));
    }
    const int cells = static_cast<int>(rows.size()) - 1;
    if (cells < 1 || cells % steps_per_unit != 0)
        throw parse_error("node count does not fit the given steps_per_unit", lineno);
    Trajectory x(TimeGrid{cells / steps_per_unit, steps_per_unit}, dim);
    for (int k = 0; k <= cells; ++k)
        for (int j = 0; j < dim; ++j)
            x.at(k, j) = rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(j) + 1];
    return x;
}

}  // namespace evlab
