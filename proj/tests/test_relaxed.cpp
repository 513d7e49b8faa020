#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "evlab/errors.hpp"
#include "evlab/relaxed.hpp"

using namespace evlab;

namespace {

// Classical explicit Euler under piecewise-constant controls, written
// independently of the measure path.
std::vector<double> classical_euler(const Dynamics& dyn, TimeGrid grid,
                                    const std::function<std::size_t(int)>& pick_p,
                                    const std::function<std::size_t(int)>& pick_q) {
    std::vector<double> x(dyn.x0);
    std::vector<double> f(static_cast<std::size_t>(dyn.dim));
    std::vector<double> nodes;
    for (double v : x) nodes.push_back(v);
    const double h = grid.step();
    for (int k = 0; k < grid.cell_count(); ++k) {
        dyn.field(grid.time_at(k), x, dyn.p_atoms[pick_p(k)], dyn.q_atoms[pick_q(k)], f);
        for (int j = 0; j < dyn.dim; ++j) {
            const auto js = static_cast<std::size_t>(j);
            x[js] = x[js] + h * f[js];
            nodes.push_back(x[js]);
        }
    }
    return nodes;
}

}  // namespace

TEST_CASE("dirac measures reduce to classical euler bitwise") {
    const auto grid = make_grid(2, 8);
    Dynamics dyn = linear_sum_dynamics({0.5}, {-1.0, 1.0}, {-1.0, 1.0});
    const auto nu = NuMeasure::dirac(grid, 2, 1);  // v = +1 in every cell

    auto pick_p = [](int c, std::size_t) { return static_cast<std::size_t>(c % 2); };
    const auto eta = EtaMeasure::from_selection(nu, 2, pick_p);
    CHECK(eta.marginal_error(nu) == 0.0);

    const auto x = traj_of_eta(eta, dyn);
    const auto oracle = classical_euler(dyn, grid,
                                        [](int c) { return static_cast<std::size_t>(c % 2); },
                                        [](int) { return std::size_t{1}; });
    for (int k = 0; k < x.nodes(); ++k)
        CHECK(x.at(k, 0) == oracle[static_cast<std::size_t>(k)]);
}

TEST_CASE("uniform weights on symmetric atoms freeze the state") {
    const auto grid = make_grid(3, 16);
    Dynamics dyn = linear_sum_dynamics({0.75}, {-1.0, 1.0}, {-1.0, 1.0});
    const auto nu = NuMeasure::uniform(grid, 2);
    const auto eta = EtaMeasure::from_kernels(nu, 2, [](int, std::size_t, std::size_t) {
        return 0.5;
    });
    const auto x = traj_of_eta(eta, dyn);
    for (int k = 0; k < x.nodes(); ++k) CHECK(x.at(k, 0) == 0.75);
}

TEST_CASE("euler error halves with the step against the exponential") {
    Dynamics dyn = scalar_bilinear_dynamics(1.0, 1.0, {0.0}, {0.0});
    const double exact = std::exp(2.0);
    auto terminal_error = [&](int steps) {
        const auto grid = make_grid(2, steps);
        const auto nu = NuMeasure::dirac(grid, 1, 0);
        const auto eta = EtaMeasure::from_selection(nu, 1, [](int, std::size_t) {
            return std::size_t{0};
        });
        const auto x = traj_of_eta(eta, dyn);
        return std::abs(x.at(x.nodes() - 1, 0) - exact);
    };
    const double e16 = terminal_error(16);
    const double e32 = terminal_error(32);
    const double e64 = terminal_error(64);
    CHECK(e16 / e32 > 1.7);
    CHECK(e16 / e32 < 2.3);
    CHECK(e32 / e64 > 1.7);
    CHECK(e32 / e64 < 2.3);
}

TEST_CASE("increments stay in the hull of the field samples") {
    const auto grid = make_grid(2, 4);
    Dynamics dyn = linear_sum_dynamics({0.0}, {-1.0, 0.0, 1.0}, {-1.0, 1.0});
    const auto nu = NuMeasure::uniform(grid, 2);
    const auto etas = consistent_etas(nu, 3, SelectionStrategy::sampled(12, 99));
    const double h = grid.step();
    for (const auto& eta : etas) {
        const auto x = traj_of_eta(eta, dyn);
        for (int k = 0; k + 1 < x.nodes(); ++k) {
            const double inc = x.at(k + 1, 0) - x.at(k, 0);
            CHECK(inc >= h * -2.0 - 1e-15);
            CHECK(inc <= h * 2.0 + 1e-15);
        }
    }
}

TEST_CASE("selection enumeration matches the counting oracle") {
    const auto cell = make_grid(1, 1);  // one cell

    SUBCASE("2 p-atoms, 1 q-atom") {
        const auto nu = NuMeasure::dirac(cell, 1, 0);
        const auto etas = consistent_etas(nu, 2, SelectionStrategy::all());
        CHECK(etas.size() == 2);
    }
    SUBCASE("2 x 2") {
        const auto nu = NuMeasure::uniform(cell, 2);
        const auto etas = consistent_etas(nu, 2, SelectionStrategy::all());
        CHECK(etas.size() == 4);
        // Enumeration oracle: distinct weight tables, all marginally exact.
        std::set<std::vector<double>> tables;
        for (const auto& eta : etas) {
            CHECK(eta.marginal_error(nu) == 0.0);
            std::vector<double> t;
            for (std::size_t p = 0; p < 2; ++p)
                for (std::size_t q = 0; q < 2; ++q) t.push_back(eta.weight(0, p, q));
            tables.insert(t);
        }
        CHECK(tables.size() == 4);
    }
    SUBCASE("3 x 3") {
        const auto nu = NuMeasure::uniform(cell, 3);
        CHECK(selection_count(nu, 3, 1000) == 27);
        CHECK(consistent_etas(nu, 3, SelectionStrategy::all()).size() == 27);
    }
    SUBCASE("cap exceeded advises sampling") {
        const auto grid = make_grid(4, 2);
        const auto nu = NuMeasure::uniform(grid, 3);
        CHECK_THROWS_WITH_AS(
            (void)consistent_etas(nu, 3, SelectionStrategy::all(100)),
            doctest::Contains("sample"), error);
    }
}

TEST_CASE("sampled etas are marginally exact and nested by count") {
    const auto grid = make_grid(2, 4);
    const auto nu = NuMeasure::uniform(grid, 3);
    const auto etas = consistent_etas(nu, 3, SelectionStrategy::sampled(100, 7));
    CHECK(etas.size() == 100);
    for (const auto& eta : etas) CHECK(eta.marginal_error(nu) <= 1e-15);

    // Same seed, larger count: the smaller draw is a prefix, so the bundle
    // can only grow.
    Dynamics dyn = linear_sum_dynamics({1.0}, {-1.0, 0.0, 1.0}, {-1.0, 0.0, 1.0});
    const auto small = bundle_of_nu(nu, dyn, SelectionStrategy::sampled(20, 7));
    const auto big = bundle_of_nu(nu, dyn, SelectionStrategy::sampled(60, 7));
    for (const auto& x : small.members()) {
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& y : big.members())
            nearest = std::min(nearest, sup_distance(x, y, 2));
        CHECK(nearest == 0.0);
    }
}

TEST_CASE("family restriction commutes with building from restricted nu") {
    const auto grid = make_grid(2, 4);
    Dynamics dyn = linear_sum_dynamics({1.0}, {-1.0, 1.0}, {-1.0, 1.0});
    // Sampled draws share their per-index kernels across restrictions, so
    // the identity holds bitwise; a mode flip would break it.
    const auto strategy = SelectionStrategy::sampled(64, 3);

    std::vector<NuMeasure> nus{NuMeasure::uniform(grid, 2), NuMeasure::dirac(grid, 2, 0)};
    const auto full = family_v(nus, dyn, strategy);

    for (std::size_t i = 0; i < nus.size(); ++i) {
        const auto direct = bundle_of_nu(nus[i].restricted(1), dyn, strategy);
        const auto restricted = restrict_bundle(full[i], 1);
        CHECK(hausdorff_sup(direct, restricted, 1) == 0.0);
    }

    // Enumerated selections agree as sets after restriction.
    const auto coarse = make_grid(2, 1);
    const auto nu = NuMeasure::uniform(coarse, 2);
    const auto all = SelectionStrategy::all(100000);
    const auto whole = bundle_of_nu(nu, dyn, all);
    const auto direct = bundle_of_nu(nu.restricted(1), dyn, all);
    CHECK(hausdorff_sup(direct, restrict_bundle(whole, 1), 1) == 0.0);

    // Distinct measures give distinct bundles.
    std::vector<double> w(static_cast<std::size_t>(grid.cell_count()) * 2, 0.0);
    for (int c = 0; c < grid.cell_count(); ++c) {
        w[static_cast<std::size_t>(c) * 2 + (c == 0 ? 1 : 0)] = 1.0;
    }
    const NuMeasure other(grid, 2, std::move(w), "flipped");
    const auto b0 = bundle_of_nu(nus[1], dyn, strategy);
    const auto b1 = bundle_of_nu(other, dyn, strategy);
    CHECK(hausdorff_sup(b0, b1, 2) > 0.0);
}

TEST_CASE("continuity probe shrinks with the perturbation") {
    const auto grid = make_grid(2, 4);
    Dynamics dyn = linear_sum_dynamics({1.0}, {-1.0, 0.0, 1.0}, {-1.0, 0.0, 1.0});
    const auto nu = NuMeasure::uniform(grid, 3);
    const double deltas[] = {0.2, 0.1, 0.05, 0.0};
    const auto table = continuity_probe(nu, dyn, deltas, SelectionStrategy::sampled(3, 11));

    REQUIRE(table.rows.size() == 4);
    CHECK(table.monotone);
    CHECK(table.rows[3].shift == 0.0);
    CHECK(table.rows[0].shift / table.rows[1].shift >= 1.8);
    for (const auto& row : table.rows)
        if (row.requested_delta > 0) CHECK(row.shift <= row.bound);

    CHECK_THROWS_AS((void)continuity_probe(nu, dyn, std::vector<double>{0.1, 0.2},
                                           SelectionStrategy::sampled(8, 1)),
                    std::invalid_argument);
}

TEST_CASE("integration blowup reports the step") {
    Dynamics dyn;
    dyn.dim = 1;
    dyn.x0 = {3.0};
    dyn.p_atoms = {{0.0}};
    dyn.q_atoms = {{0.0}};
    dyn.field = [](double, std::span<const double> x, std::span<const double>,
                   std::span<const double>, std::span<double> dx) {
        dx[0] = x[0] * x[0] * x[0];
    };
    dyn.name = "cubic";
    const auto grid = make_grid(6, 2);
    const auto nu = NuMeasure::dirac(grid, 1, 0);
    const auto eta = EtaMeasure::from_selection(nu, 1, [](int, std::size_t) {
        return std::size_t{0};
    });
    CHECK_THROWS_AS((void)traj_of_eta(eta, dyn), integration_error);
}

TEST_CASE("declared dynamics constants hold on random samples") {
    Dynamics lin = linear_sum_dynamics({1.0}, {-1.0, 0.0, 1.0}, {-1.0, 0.0, 1.0});
    const auto c1 = validate_dynamics(lin, 6.0, 4.0, 500, 5);
    CHECK(c1.ok);
    CHECK(c1.max_lipschitz_ratio == 0.0);

    Dynamics bil = scalar_bilinear_dynamics(1.0, 1.0, {-1.0, 1.0}, {-1.0, 1.0});
    const auto c2 = validate_dynamics(bil, 6.0, 4.0, 500, 6);
    CHECK(c2.ok);
    CHECK(c2.max_lipschitz_ratio <= 1.0 + 1e-9);
}

TEST_CASE("nu measures round-trip through the text form") {
    const auto grid = make_grid(2, 2);
    std::vector<double> w{0.5, 0.25, 0.25, 0.0, 1.0, 0.0, 0.2, 0.3, 0.5, 1.0, 0.0, 0.0};
    const NuMeasure nu(grid, 3, w, "mix");

    std::stringstream ss;
    write_nu(ss, nu);
    const auto back = read_nu(ss);
    CHECK(back.grid() == grid);
    CHECK(back.q_count() == 3);
    CHECK(back.label() == "mix");
    for (int c = 0; c < nu.cells(); ++c)
        for (std::size_t q = 0; q < 3; ++q) CHECK(back.weight(c, q) == nu.weight(c, q));

    std::stringstream missing("evlab-nu v1\nhorizon: 1\n");
    CHECK_THROWS_AS((void)read_nu(missing), parse_error);
    std::stringstream badrow(
        "evlab-nu v1\nhorizon: 1\nsteps_per_unit: 1\natoms: 2\ncell: 0.5\n");
    CHECK_THROWS_AS((void)read_nu(badrow), parse_error);
    std::stringstream badsum(
        "evlab-nu v1\nhorizon: 1\nsteps_per_unit: 1\natoms: 2\ncell: 0.5 0.4\n");
    CHECK_THROWS_AS((void)read_nu(badsum), parse_error);
}

TEST_CASE("registry names") {
    CHECK(dynamics_by_name("linear").has_value());
    CHECK(dynamics_by_name("bilinear").has_value());
    CHECK_FALSE(dynamics_by_name("unknown").has_value());
}
