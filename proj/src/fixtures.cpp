#include "evlab/fixtures.hpp"

namespace evlab {

namespace {

std::vector<int> iota_horizons(int n) {
    std::vector<int> h;
    for (int i = 1; i <= n; ++i) h.push_back(i);
    return h;
}

}  // namespace

Fixture example1(TimeGrid grid) {
    ParameterizedFamily pf;
    pf.box = {{0.0, 1.0}};
    pf.label = "example1";
    pf.generator = [grid](std::span<const double> theta) {
        std::vector<Trajectory> members;
        for (int k = 1; k <= 15; ++k) {
            members.push_back(Trajectory::constant(grid, k / 16.0));
            members.push_back(Trajectory::constant(grid, -k / 16.0));
        }
        const double tail = theta[0] / 128.0;
        members.push_back(Trajectory::constant(grid, tail));
        members.push_back(Trajectory::constant(grid, -tail));
        return Bundle(std::move(members));
    };

    Fixture f{
        "example1",
        BundleFamily(std::move(pf)),
        origin_target(),
        /*exact_original=*/true,
        /*robust_original=*/false,
        /*exact_extended=*/false,
        CostFunctional::min_norm_over(1, 1.0),
        {0.2, 0.1, 0.05, 0.01},
        iota_horizons(8),
        ClosureParams{},
        "All members are nonzero constants, so evasion from T x {0} holds "
        "outright; but each bundle carries a pair within 1/128 of zero, so "
        "every tested inflation of the target is hit immediately. The "
        "restrictions of the ideal bundle are not closed: their limit point "
        "is the constant 0, which the closure run toward the lower face "
        "recovers, and which evades nothing."};
    return f;
}

Fixture example2(TimeGrid grid) {
    ParameterizedFamily pf;
    pf.box = {{0.0, 1.0}};
    pf.label = "example2";
    pf.generator = [grid](std::span<const double> theta) {
        const double p = theta[0];
        auto y = Trajectory::sampled(grid, 1, [p](int, double t, std::span<double> out) {
            out[0] = (p * t - 1.0) * (p * t - 1.0);
        });
        return Bundle({std::move(y)});
    };

    Fixture f{
        "example2",
        BundleFamily(std::move(pf)),
        origin_target(),
        /*exact_original=*/false,
        /*robust_original=*/true,
        /*exact_extended=*/true,
        CostFunctional::min_norm_over(1, 1.0),
        {0.2, 0.1, 0.05, 0.01},
        iota_horizons(8),
        ClosureParams{},
        "y_p(t) = (p t - 1)^2 hits zero at t = 1/p, so no single member "
        "evades forever, yet clearance-eps evasion survives on every finite "
        "window by taking p small. The members converge pointwise to the "
        "constant 1 as p -> 0; that limit bundle evades globally and is what "
        "the closure appends. (The superficially similar form (t - p)^2/p^2 "
        "has no finite pointwise limit as p -> 0 and is not used.)"};
    return f;
}

Fixture bilinear_system(TimeGrid grid, std::uint64_t seed) {
    Dynamics dyn = linear_sum_dynamics({1.0}, {-1.0, 0.0, 1.0}, {-1.0, 0.0, 1.0});

    std::vector<NuMeasure> nus;
    nus.push_back(NuMeasure::dirac(grid, 3, 2));  // v = +1
    nus.push_back(NuMeasure::dirac(grid, 3, 1));  // v = 0
    nus.push_back(NuMeasure::dirac(grid, 3, 0));  // v = -1
    nus.push_back(NuMeasure::uniform(grid, 3));

    SelectionStrategy strategy = SelectionStrategy::automatic_mode(6561, 512, seed);

    Fixture f{
        "bilinear",
        BundleFamily(family_v(nus, dyn, strategy)),
        origin_target(),
        /*exact_original=*/true,
        /*robust_original=*/true,
        /*exact_extended=*/true,
        CostFunctional::min_norm_over(1, 1.0),
        {0.2, 0.1, 0.05, 0.01},
        iota_horizons(6),
        ClosureParams{},
        "Against nu = dirac(v = +1) the averaged field u + 1 is nonnegative "
        "for every consistent eta, so the whole bundle stays at or above 1 "
        "and evasion is exact with clearance 1; the same bundle survives "
        "every tested inflation. The family is explicit, hence its own "
        "closure, and the two verdicts must agree."};
    f.dynamics = std::move(dyn);
    f.nus = std::move(nus);
    f.strategy = strategy;
    return f;
}

Fixture example1() { return example1(make_grid(8, 4)); }
Fixture example2() { return example2(make_grid(8, 64)); }
Fixture bilinear_system() { return bilinear_system(make_grid(6, 1), 0); }

std::optional<TimeGrid> fixture_default_grid(const std::string& name) {
    if (name == "example1") return make_grid(8, 4);
    if (name == "example2") return make_grid(8, 64);
    if (name == "bilinear") return make_grid(6, 1);
    return std::nullopt;
}

std::optional<Fixture> fixture_by_name(const std::string& name) {
    return fixture_by_name(name, std::nullopt, 0);
}

std::optional<Fixture> fixture_by_name(const std::string& name,
                                       std::optional<TimeGrid> grid, std::uint64_t seed) {
    if (name == "example1") return example1(grid.value_or(make_grid(8, 4)));
    if (name == "example2") return example2(grid.value_or(make_grid(8, 64)));
    if (name == "bilinear") return bilinear_system(grid.value_or(make_grid(6, 1)), seed);
    return std::nullopt;
}

std::vector<std::string> fixture_names() { return {"example1", "example2", "bilinear"}; }

}  // namespace evlab
