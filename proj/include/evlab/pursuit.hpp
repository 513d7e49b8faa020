#pragma once

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "evlab/family.hpp"

// Approach-evasion machinery: closed target sets given by gauges, hitting
// and exit times, the evasion value over a family, and the exactness /
// robustness classification. "Exact" means a single bundle keeps every
// member strictly outside the target over the whole certified horizon;
// "robust" means the same survives inflating the target by some eps. All
// infinite-horizon statements are certified only up to the largest tested
// horizon, and every report says so.

namespace evlab {

inline constexpr double kNever = std::numeric_limits<double>::infinity();

struct TargetSet {
    // The closed set is {(t, x) : gauge(t, x) <= 0}.
    std::function<double(double, std::span<const double>)> gauge;
    std::string description;
};

// T x {0}: gauge(t, x) = |x|.
TargetSet origin_target();
// Nothing is ever inside (gauge = +1).
TargetSet empty_target();
// Everything is inside (gauge = -1).
TargetSet everything_target();

// {gauge <= eps}: the canonical closed neighborhood of the target.
TargetSet inflate(const TargetSet& m, double eps);

// First grid node t_k <= horizon with gauge <= 0, kNever if none.
double hitting_time(const Trajectory& x, const TargetSet& m, int horizon);

// First grid node where the tube gauge goes positive, kNever if the path
// stays inside through the whole grid.
double exit_time(const Trajectory& x, const TargetSet& tube);

struct EvasionValues {
    std::map<int, double> value;         // horizon -> sup-inf hitting time (may be kNever)
    bool infinite_up_to_horizon = false; // every tested horizon has an avoiding bundle
};

// sup over bundles of the min member hitting time, per horizon.
EvasionValues value_cm(std::span<const Bundle> family, const TargetSet& m,
                       std::span<const int> horizons);

struct ExactnessResult {
    bool exact = false;
    std::optional<std::size_t> witness;  // bundle index
    double witness_clearance = 0.0;      // min gauge along the witness
    int certified_horizon = 0;
    double margin = 0.0;
};

// True iff one bundle keeps gauge > margin at every node up to
// max(horizons), for every member.
ExactnessResult exactness(std::span<const Bundle> family, const TargetSet& m,
                          std::span<const int> horizons, double margin);

struct RobustnessResult {
    bool robust = false;
    std::optional<double> witness_eps;       // largest working inflation
    std::map<double, bool, std::greater<>> per_eps;  // eps -> evasion survives
    int certified_horizon = 0;
};

// True iff some eps in the (positive, descending) list keeps the evasion
// value infinite up to every tested horizon after inflating the target.
RobustnessResult robustness(std::span<const Bundle> family, const TargetSet& m,
                            std::span<const double> eps_list, std::span<const int> horizons);

// The full classification of one family against one target.
struct EvasionReport {
    EvasionValues values;
    ExactnessResult exact;
    RobustnessResult robust;
};

EvasionReport classify_evasion(std::span<const Bundle> family, const TargetSet& m,
                               std::span<const double> eps_list, std::span<const int> horizons,
                               double margin);

// Robustness of the sampled family against exactness of its closure. The
// extended side is certified at margin = min(eps_list): avoidance with a
// strictly positive clearance is exactly avoidance of the matching
// inflation, so the two sides are compared at the same resolution.
struct EquivalenceReport {
    bool robust_original = false;
    bool exact_extended = false;
    bool agree = false;
    double margin = 0.0;
    ExactnessResult original_exact;   // margin 0, for reference
    ExactnessResult extended_exact;
    RobustnessResult robust;
    ClosureReport closure;
};

EquivalenceReport exactness_robustness_check(const BundleFamily& f, const TargetSet& m,
                                             std::span<const double> eps_list,
                                             std::span<const int> horizons,
                                             const ClosureParams& params = {});

// The two specializations: when the closure appends nothing, or when every
// appended bundle still covers some original one, exactness and robustness
// of the original family must already coincide.
struct CorollaryChecks {
    bool closure_added_nothing = false;
    double max_gap = 0.0;
    bool c1_applicable = false;
    bool c1_holds = false;
    bool c2_applicable = false;
    bool c2_holds = false;
    bool exact_original = false;   // at margin = min eps
    bool robust_original = false;
};

CorollaryChecks corollary_checks(const BundleFamily& f, const TargetSet& m,
                                 std::span<const double> eps_list,
                                 std::span<const int> horizons, double tol,
                                 const ClosureParams& params = {});

}  // namespace evlab
