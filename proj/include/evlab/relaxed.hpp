#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evlab/bundle.hpp"
#include "evlab/family.hpp"
#include "evlab/pursuit.hpp"

// The discriminated control game in measure form. Controls are relaxed to
// per-cell atomic probability weights: nu fixes the time marginal over the
// second player's atoms, eta distributes each cell over both players' atoms
// consistently with nu, and the trajectory map is explicit Euler on the
// cell-averaged field. The family of bundles {trajectories of all etas
// consistent with nu} is the explicit family the evasion checks run on.

namespace evlab {

struct Dynamics {
    int dim = 1;
    std::vector<double> x0;
    std::vector<std::vector<double>> p_atoms;  // first player's control atoms
    std::vector<std::vector<double>> q_atoms;  // second player's control atoms
    std::function<void(double, std::span<const double>, std::span<const double>,
                       std::span<const double>, std::span<double>)>
        field;  // (t, x, u, v, dx_out)
    double lipschitz = 0.0;  // declared bound on compact windows
    double growth = 1.0;     // declared: |f| <= growth * (1 + |x|)
    std::string name;
};

// Componentwise xdot = u + v; atoms are scalars replicated across dim.
Dynamics linear_sum_dynamics(std::vector<double> x0, std::vector<double> p_scalars,
                             std::vector<double> q_scalars);

// Scalar xdot = a*x + u + v.
Dynamics scalar_bilinear_dynamics(double a, double x0, std::vector<double> p_scalars,
                                  std::vector<double> q_scalars);

// Built-in registry for the CLI: "linear" and "bilinear".
std::optional<Dynamics> dynamics_by_name(const std::string& name);

// Randomized check of the declared constants on a compact window.
struct DynamicsCheck {
    double max_lipschitz_ratio = 0.0;  // observed |df|/|dx|
    double max_growth_ratio = 0.0;     // observed |f| / (1 + |x|)
    bool ok = false;                   // both below the declared constants
};
DynamicsCheck validate_dynamics(const Dynamics& dyn, double t_max, double x_radius,
                                int samples, std::uint64_t seed);

// Piecewise-constant-in-time atomic measure over the q atoms with unit mass
// per grid cell (the Lebesgue time marginal at this discretization).
class NuMeasure {
public:
    NuMeasure(TimeGrid grid, std::size_t q_count, std::vector<double> cell_weights,
              std::string label = "");
    static NuMeasure dirac(TimeGrid grid, std::size_t q_count, std::size_t q_index);
    static NuMeasure uniform(TimeGrid grid, std::size_t q_count);

    const TimeGrid& grid() const { return grid_; }
    std::size_t q_count() const { return q_count_; }
    int cells() const { return grid_.cell_count(); }
    std::span<const double> cell(int c) const;
    double weight(int c, std::size_t q) const { return cell(c)[q]; }

    NuMeasure restricted(int horizon) const;
    const std::string& label() const { return label_; }

private:
    TimeGrid grid_;
    std::size_t q_count_;
    std::vector<double> w_;  // [cell][q]
    std::string label_;
};

// Joint per-cell weights over p x q atoms, consistent with some nu: the
// p-sum of each cell column equals nu's weight on that q atom.
class EtaMeasure {
public:
    EtaMeasure(TimeGrid grid, std::size_t p_count, std::size_t q_count,
               std::vector<double> cell_weights);

    // One p choice per (cell, positive-weight q): the extreme points.
    static EtaMeasure from_selection(const NuMeasure& nu, std::size_t p_count,
                                     const std::function<std::size_t(int, std::size_t)>& pick);
    // Arbitrary conditional kernels k(p | cell, q).
    static EtaMeasure from_kernels(const NuMeasure& nu, std::size_t p_count,
                                   const std::function<double(int, std::size_t, std::size_t)>& k);

    const TimeGrid& grid() const { return grid_; }
    std::size_t p_count() const { return p_count_; }
    std::size_t q_count() const { return q_count_; }
    double weight(int c, std::size_t p, std::size_t q) const;

    // Largest violation of the per-cell marginal identity against nu.
    double marginal_error(const NuMeasure& nu) const;

private:
    TimeGrid grid_;
    std::size_t p_count_;
    std::size_t q_count_;
    std::vector<double> w_;  // [cell][p][q]
};

// Structured-text form of a nu measure: grid parameters, atom count, one
// weight row per grid cell.
NuMeasure read_nu(std::istream& in);
void write_nu(std::ostream& out, const NuMeasure& nu);

struct SelectionStrategy {
    enum class Kind { all_selections, sample, automatic };
    Kind kind = Kind::automatic;
    long long cap = 6561;     // hard ceiling for enumeration (3^8 by default)
    int sample_count = 512;   // random kernels drawn in sample mode
    std::uint64_t seed = 0;

    static SelectionStrategy all(long long cap = 6561);
    static SelectionStrategy sampled(int count, std::uint64_t seed);
    static SelectionStrategy automatic_mode(long long cap, int count, std::uint64_t seed);
};

// Number of deterministic selections for nu (extreme points of the
// consistency polytope); +inf-like saturation guarded by the cap check.
long long selection_count(const NuMeasure& nu, std::size_t p_count, long long cap);

// Etas consistent with nu. all_selections enumerates every extreme point
// (throws if the count exceeds the cap, advising sample mode); sample draws
// random conditional kernels seeded per eta plus every constant selection;
// automatic picks between the two.
std::vector<EtaMeasure> consistent_etas(const NuMeasure& nu, std::size_t p_count,
                                        const SelectionStrategy& strategy);

// Explicit Euler on the cell-averaged field. Throws integration_error with
// the step index if the state leaves the finite range.
Trajectory traj_of_eta(const EtaMeasure& eta, const Dynamics& dyn);

// {traj_of_eta(eta) : eta consistent with nu}, duplicates collapsed.
Bundle bundle_of_nu(const NuMeasure& nu, const Dynamics& dyn,
                    const SelectionStrategy& strategy);

std::vector<Bundle> family_v(std::span<const NuMeasure> nus, const Dynamics& dyn,
                             const SelectionStrategy& strategy);

struct ContinuityRow {
    double requested_delta = 0.0;
    double realized_tv = 0.0;   // actual per-cell total-variation applied
    double shift = 0.0;         // Hausdorff (sup at full horizon) bundle shift
    double bound = 0.0;         // e^{L T} * T * 2 * delta * F_max
};

struct ContinuityTable {
    std::vector<ContinuityRow> rows;
    bool monotone = false;  // shift nonincreasing along descending deltas
};

// Perturbs nu by a total-variation delta per cell, rebuilds the bundle with
// the same strategy and seed, and reports the Hausdorff shift per delta.
ContinuityTable continuity_probe(const NuMeasure& nu, const Dynamics& dyn,
                                 std::span<const double> deltas,
                                 const SelectionStrategy& strategy);

struct RelaxedCheck {
    EquivalenceReport equivalence;
    double closure_gap = 0.0;           // must stay at 0 for explicit families
    ContinuityTable continuity;         // evidence on the first nu
    bool agree = false;
};

// Full pipeline: family_v, closure-adds-nothing confirmation, continuity
// evidence, and the exactness == robustness verdict.
RelaxedCheck relaxed_game_check(const Dynamics& dyn, const TargetSet& m,
                                std::span<const NuMeasure> nus,
                                std::span<const double> eps_list,
                                std::span<const int> horizons,
                                const SelectionStrategy& strategy);

}  // namespace evlab
