#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

// Uniform time grids and sampled trajectories on them, plus the two
// trajectory metrics everything else is built on: the finite-horizon sup
// metric and a weighted compact-open metric. Node times are the rationals
// k / steps_per_unit, so restrictions of different trajectories always land
// on the same nodes. Between nodes a trajectory is read as its piecewise
// linear interpolant.

namespace evlab {

struct TimeGrid {
    int horizon = 1;         // end time, whole time units
    int steps_per_unit = 1;  // nodes per unit interval

    int node_count() const { return horizon * steps_per_unit + 1; }
    int cell_count() const { return horizon * steps_per_unit; }
    double step() const { return 1.0 / steps_per_unit; }
    double time_at(int k) const { return static_cast<double>(k) / steps_per_unit; }

    bool same_step(const TimeGrid& o) const { return steps_per_unit == o.steps_per_unit; }
    bool operator==(const TimeGrid& o) const = default;
};

// Throws std::invalid_argument unless both arguments are >= 1.
TimeGrid make_grid(int horizon, int steps_per_unit);

class Trajectory {
public:
    // Zero-initialized samples.
    Trajectory(TimeGrid grid, int dim);

    // Fill from a function of (node index, time) writing the node value.
    static Trajectory sampled(TimeGrid grid, int dim,
                              const std::function<void(int, double, std::span<double>)>& fill);

    // Constant path in R^1.
    static Trajectory constant(TimeGrid grid, double value);
    // Constant path in R^d.
    static Trajectory constant(TimeGrid grid, std::span<const double> value);

    const TimeGrid& grid() const { return grid_; }
    int dim() const { return dim_; }
    int nodes() const { return grid_.node_count(); }

    double at(int node, int comp) const { return comps_[static_cast<std::size_t>(comp) * nodes() + node]; }
    double& at(int node, int comp) { return comps_[static_cast<std::size_t>(comp) * nodes() + node]; }

    // Component-major storage: component j over all nodes.
    std::span<const double> component(int j) const;
    const double* data() const { return comps_.data(); }
    std::size_t stride() const { return static_cast<std::size_t>(nodes()); }

    // Linear interpolation; t clamped to [0, horizon].
    double value_at(double t, int comp) const;

    bool operator==(const Trajectory& o) const {
        return grid_ == o.grid_ && dim_ == o.dim_ && comps_ == o.comps_;
    }

private:
    TimeGrid grid_;
    int dim_;
    std::vector<double> comps_;  // [dim][node]
};

// Requires identical step and dimension; throws incompatible_error otherwise.
// max over grid nodes t_k <= n of the Euclidean distance of the samples.
double sup_distance(const Trajectory& x, const Trajectory& y, int horizon);

// sum_{n=1..N} 2^-n * min(1, sup_distance(x, y, n)) with N the common
// horizon; a metric inducing uniform convergence on every [0, n], n <= N.
double co_metric(const Trajectory& x, const Trajectory& y);

// Truncation to [0, horizon]; same step. restrict_to(restrict_to(x,n),m)
// equals restrict_to(x,m) for m <= n.
Trajectory restrict_to(const Trajectory& x, int horizon);

// CSV with header t,x1,...,xd, one row per node, round-trip precision.
void write_csv(std::ostream& out, const Trajectory& x);
Trajectory read_csv(std::istream& in, int steps_per_unit);

}  // namespace evlab
