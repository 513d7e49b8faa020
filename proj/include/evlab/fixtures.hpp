#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evlab/family.hpp"
#include "evlab/game.hpp"
#include "evlab/pursuit.hpp"
#include "evlab/relaxed.hpp"

// Ready-made desk-scale scenarios with known analytic verdicts, used by the
// CLI and the acceptance suite. Each records the expected classification;
// the expectations always satisfy robust_original == exact_extended.

namespace evlab {

struct Fixture {
    std::string name;
    BundleFamily family;
    TargetSet target;
    bool expect_exact_original = false;
    bool expect_robust_original = false;
    bool expect_exact_extended = false;
    CostFunctional cost;
    std::vector<double> eps_list;
    std::vector<int> horizons;
    ClosureParams closure;
    std::string notes;
    // Only the measure-driven fixture fills these.
    std::optional<Dynamics> dynamics{};
    std::vector<NuMeasure> nus{};
    SelectionStrategy strategy{};
};

// One bundle of nonzero constants, symmetric about 0, with a pair that
// shrinks toward 0 along the family parameter. Evasion from T x {0} is
// exact but not robust: every inflation swallows the small pair, and the
// closure limit contains the constant 0.
Fixture example1(TimeGrid grid);
Fixture example1();

// Singleton bundles {y_p}, y_p(t) = (p t - 1)^2 over p in (0, 1]. Every
// member eventually hits 0 (at t = 1/p), yet avoidance with clearance 0.1
// survives on any finite window, and the closure adds the constant-1 limit:
// robust but not exact, exact after extension.
Fixture example2(TimeGrid grid);
Fixture example2();

// xdot = u + v from x0 = 1 with atoms {-1, 0, 1} on both sides; the family
// ranges over a handful of nu measures. The family is its own closure, so
// exactness and robustness must coincide.
Fixture bilinear_system(TimeGrid grid, std::uint64_t seed);
Fixture bilinear_system();

std::optional<TimeGrid> fixture_default_grid(const std::string& name);

std::optional<Fixture> fixture_by_name(const std::string& name);
std::optional<Fixture> fixture_by_name(const std::string& name,
                                       std::optional<TimeGrid> grid, std::uint64_t seed);
std::vector<std::string> fixture_names();

}  // namespace evlab
