#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "evlab/bundle.hpp"

// Bundle families and their constructive closure. A family is either an
// explicit finite list of bundles or a generator over a compact parameter
// box. The closure of a parameterized family is approximated by sampling
// the box on an inset epsilon-net and chasing geometric sequences toward
// each box face: when such a sequence is Hausdorff-Cauchy, the matched
// trajectorywise limit (Aitken-extrapolated) is appended as a new bundle.

namespace evlab {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    double span() const { return hi - lo; }
};

struct ParameterizedFamily {
    std::vector<Interval> box;
    std::function<Bundle(std::span<const double>)> generator;
    std::string label;
};

class BundleFamily {
public:
    explicit BundleFamily(std::vector<Bundle> bundles);
    explicit BundleFamily(ParameterizedFamily p);

    bool is_explicit() const { return std::holds_alternative<std::vector<Bundle>>(rep_); }
    const std::vector<Bundle>& bundles() const { return std::get<std::vector<Bundle>>(rep_); }
    const ParameterizedFamily& parameterized() const { return std::get<ParameterizedFamily>(rep_); }

private:
    std::variant<std::vector<Bundle>, ParameterizedFamily> rep_;
};

struct ClosureParams {
    double net_eps = 1e-3;      // parameter-space net spacing
    double cluster_tol = 1e-6;  // Cauchy-tail threshold for face limits
    int max_face_steps = 48;    // cap on geometric face sequences
};

struct FaceRun {
    std::size_t axis = 0;
    bool upper = false;    // which face of the axis
    bool cauchy = false;   // tail of consecutive distances fell below cluster_tol
    double final_step = 0; // last consecutive Hausdorff distance observed
    bool appended = false; // limit was new (not within cluster_tol of the net)
};

struct ClosureReport {
    std::vector<Bundle> sampled;                   // inset-net samples
    std::vector<std::vector<double>> sampled_at;   // matching parameters
    std::vector<Bundle> appended;                  // face limits
    std::vector<FaceRun> runs;
    std::map<int, double> horizon_gap;  // horizon -> how far the appended
                                        // bundles sit from the net (0 if none)

    // The closed family: samples plus appended limits.
    std::vector<Bundle> closed() const;
};

// Samples an explicit approximation of the closure. Explicit families pass
// through unchanged (their closure is themselves). Generator exceptions are
// rethrown with the offending parameter attached.
ClosureReport closure_family(const BundleFamily& f, const ClosureParams& params = {});

struct MembershipResult {
    bool member = false;
    std::map<int, double> gaps;  // horizon -> min Hausdorff distance into the family
};

// Tests whether a bundle belongs to the closed family: at every requested
// horizon its restriction must be within `tol` (sup-at-horizon Hausdorff)
// of some member of the closure.
MembershipResult member_of_extension(const Bundle& phi, const BundleFamily& f,
                                     std::span<const int> horizons, double tol,
                                     const ClosureParams& params = {});

struct LimitResult {
    std::optional<Bundle> limit;          // empty on divergence
    std::vector<double> consecutive;      // Hausdorff (compact-open) steps
};

// Limit of a bundle sequence: requires the consecutive compact-open
// Hausdorff distances to end in a monotone tail below `tol`; the limit is
// the matched trajectorywise extrapolation of the last three bundles.
// Members are matched by nearest neighbor when cardinalities differ.
LimitResult limit_bundle(std::span<const Bundle> seq, double tol);

}  // namespace evlab
