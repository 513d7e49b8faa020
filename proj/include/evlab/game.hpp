#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "evlab/family.hpp"

// One-shot sup-inf games over bundle families: the first player commits a
// bundle, the second picks a trajectory out of it. Costs are functionals of
// the whole path; the builtins depend only on a declared finite horizon,
// which is what makes them continuous in the compact-open sense.

namespace evlab {

class CostFunctional {
public:
    // min(cap, min over nodes t <= horizon of |x(t)|).
    static CostFunctional min_norm_over(int horizon, double cap);
    // |x(at)| read at an integer time on the grid.
    static CostFunctional terminal_norm(int at);
    // sum_{n<=horizon} 2^-n * min(1, max over nodes t <= n of |x(t)|).
    static CostFunctional weighted_norm(int horizon);
    // Caller-supplied functional with a declared continuity contract.
    static CostFunctional custom(std::function<double(const Trajectory&)> fn,
                                 bool declared_continuous, std::string name);

    double operator()(const Trajectory& x) const;
    bool declared_continuous() const { return continuous_; }
    const std::string& name() const { return name_; }

    // Cost scaled by a positive factor (argmax/argmin invariant).
    CostFunctional scaled(double factor) const;

private:
    CostFunctional(std::function<double(const Trajectory&)> fn, bool cont, std::string name)
        : fn_(std::move(fn)), continuous_(cont), name_(std::move(name)) {}
    std::function<double(const Trajectory&)> fn_;
    bool continuous_;
    std::string name_;
};

struct BundleEval {
    double value = 0.0;
    std::size_t argmin = 0;  // lowest index on ties
};

// Exact minimum over the finite bundle.
BundleEval inf_over_bundle(const CostFunctional& c, const Bundle& phi);

struct GameValue {
    double value = 0.0;
    bool attained = false;
    std::optional<std::size_t> bundle_index;
    std::optional<std::size_t> trajectory_index;
    std::string bundle_label;
    bool witness_appended = false;  // maximizer sits on a closure limit
};

// Max over an explicit family of the bundle infima; always attained.
GameValue maximin(std::span<const Bundle> family, const CostFunctional& c);

struct ExtendedValue {
    GameValue value;
    ClosureReport closure;
};

// Closure of the family followed by maximin over it. Requires a cost with a
// declared continuity contract.
ExtendedValue extended_maximin(const BundleFamily& f, const CostFunctional& c,
                               const ClosureParams& params = {});

struct ExtensionAgreement {
    double original_value = 0.0;  // maximin over the sampled family
    double extended_value = 0.0;  // maximin over the closed family
    bool attained = false;
    GameValue original;
    GameValue extended;
    double net_eps = 0.0;
    double resolution_bound = 0.0;  // empirical modulus across the net
    double gap = 0.0;               // |extended - original|
    bool agree = false;             // gap <= tol + resolution_bound
};

// Checks that closing the family does not move the value: the extended
// maximum must match the sampled supremum up to the stated tolerance plus a
// net-resolution bound estimated from adjacent samples.
ExtensionAgreement extension_agreement(const BundleFamily& f, const CostFunctional& c,
                                       double tol, const ClosureParams& params = {});

}  // namespace evlab
