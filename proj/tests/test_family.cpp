#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "evlab/errors.hpp"
#include "evlab/family.hpp"

using namespace evlab;

namespace {

Bundle parabola_bundle(TimeGrid grid, double p) {
    auto y = Trajectory::sampled(grid, 1, [p](int, double t, std::span<double> o) {
        o[0] = (p * t - 1.0) * (p * t - 1.0);
    });
    return Bundle({std::move(y)});
}

BundleFamily parabola_family(TimeGrid grid) {
    ParameterizedFamily pf;
    pf.box = {{0.0, 1.0}};
    pf.generator = [grid](std::span<const double> theta) {
        return parabola_bundle(grid, theta[0]);
    };
    return BundleFamily(std::move(pf));
}

}  // namespace

TEST_CASE("family construction validates") {
    CHECK_THROWS_AS(BundleFamily(std::vector<Bundle>{}), std::invalid_argument);
    ParameterizedFamily bad;
    bad.box = {{1.0, 1.0}};
    bad.generator = [](std::span<const double>) {
        return Bundle({Trajectory::constant(make_grid(1, 1), 0.0)});
    };
    CHECK_THROWS_AS(BundleFamily(std::move(bad)), std::invalid_argument);
}

TEST_CASE("limit of a constant sequence is its element") {
    const auto grid = make_grid(2, 4);
    const Bundle b({Trajectory::constant(grid, 0.5)});
    std::vector<Bundle> seq{b, b, b, b};
    const auto res = limit_bundle(seq, 1e-9);
    REQUIRE(res.limit.has_value());
    CHECK(res.limit->size() == 1);
    CHECK((*res.limit)[0] == b[0]);
}

TEST_CASE("limit of the halving parabola sequence is the constant 1") {
    const auto grid = make_grid(4, 16);
    std::vector<Bundle> seq;
    for (int k = 0; k <= 24; ++k) seq.push_back(parabola_bundle(grid, std::ldexp(1.0, -k)));
    const auto res = limit_bundle(seq, 1e-4);
    REQUIRE(res.limit.has_value());
    const auto& lim = (*res.limit)[0];
    for (int k = 0; k < lim.nodes(); ++k)
        CHECK(lim.at(k, 0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("greedy matching handles unequal cardinalities") {
    const auto grid = make_grid(2, 4);
    std::vector<Bundle> seq;
    for (int k = 0; k < 12; ++k) {
        const double d = std::ldexp(1.0, -k);
        std::vector<Trajectory> ms{Trajectory::constant(grid, d),
                                   Trajectory::constant(grid, 1.0 + d)};
        if (k == 0) ms.push_back(Trajectory::constant(grid, 0.5));
        seq.push_back(Bundle(std::move(ms)));
    }
    const auto res = limit_bundle(seq, 1e-2);
    REQUIRE(res.limit.has_value());
    CHECK(res.limit->size() == 2);
    // The two chains extrapolate to 0 and 1.
    std::vector<double> vals{(*res.limit)[0].at(0, 0), (*res.limit)[1].at(0, 0)};
    std::sort(vals.begin(), vals.end());
    CHECK(vals[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(vals[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("alternating far-apart bundles diverge") {
    const auto grid = make_grid(1, 4);
    const Bundle a({Trajectory::constant(grid, 0.0)});
    const Bundle b({Trajectory::constant(grid, 1.0)});
    std::vector<Bundle> seq{a, b, a, b, a, b};
    CHECK_FALSE(limit_bundle(seq, 1e-3).limit.has_value());
    CHECK_THROWS_AS((void)limit_bundle({}, 1e-3), std::invalid_argument);
}

TEST_CASE("closure of an explicit family passes it through") {
    const auto grid = make_grid(2, 4);
    std::vector<Bundle> bundles{Bundle({Trajectory::constant(grid, 0.0)}),
                                Bundle({Trajectory::constant(grid, 1.0)})};
    const BundleFamily f(bundles);
    const auto rep = closure_family(f);
    CHECK(rep.sampled.size() == 2);
    CHECK(rep.appended.empty());
    for (const auto& [n, g] : rep.horizon_gap) CHECK(g == 0.0);
}

TEST_CASE("closure of a constant generator collapses to one bundle") {
    const auto grid = make_grid(2, 4);
    ParameterizedFamily pf;
    pf.box = {{0.0, 1.0}};
    pf.generator = [grid](std::span<const double>) {
        return Bundle({Trajectory::constant(grid, 0.25)});
    };
    const auto rep = closure_family(BundleFamily(std::move(pf)), {1e-2, 1e-6, 32});
    CHECK(rep.sampled.size() == 1);
    CHECK(rep.appended.empty());
}

TEST_CASE("closure of the parabola family appends the constant-1 limit") {
    const auto grid = make_grid(4, 32);
    const auto rep = closure_family(parabola_family(grid), {1e-2, 1e-6, 48});

    REQUIRE(!rep.appended.empty());
    bool found_one = false;
    for (const auto& a : rep.appended) {
        bool all_one = true;
        for (const auto& x : a.members())
            for (int k = 0; k < x.nodes(); ++k)
                if (std::abs(x.at(k, 0) - 1.0) > 1e-9) all_one = false;
        if (all_one) found_one = true;
    }
    CHECK(found_one);

    // Both face runs were Cauchy; the gap table is positive where the limit
    // genuinely extends the net.
    for (const auto& run : rep.runs) CHECK(run.cauchy);
    CHECK(rep.horizon_gap.at(4) > 0.0);
}

TEST_CASE("non-cauchy face sequences are flagged, not appended") {
    const auto grid = make_grid(1, 4);
    ParameterizedFamily pf;
    pf.box = {{0.0, 1.0}};
    // Oscillates ever faster toward the lower face; no Hausdorff limit.
    pf.generator = [grid](std::span<const double> theta) {
        return Bundle({Trajectory::constant(grid, std::sin(1.0 / (theta[0] + 1e-12)))});
    };
    const auto rep = closure_family(BundleFamily(std::move(pf)), {0.05, 1e-6, 40});
    bool lower_flagged = false;
    for (const auto& run : rep.runs)
        if (run.axis == 0 && !run.upper) {
            CHECK_FALSE(run.cauchy);
            CHECK_FALSE(run.appended);
            lower_flagged = true;
        }
    CHECK(lower_flagged);
}

TEST_CASE("generator failures carry the parameter") {
    ParameterizedFamily pf;
    pf.box = {{0.0, 1.0}};
    pf.generator = [](std::span<const double> theta) -> Bundle {
        if (theta[0] < 0.5) throw std::runtime_error("boom");
        return Bundle({Trajectory::constant(make_grid(1, 1), 0.0)});
    };
    CHECK_THROWS_WITH_AS((void)closure_family(BundleFamily(std::move(pf)), {0.5, 1e-6, 8}),
                         doctest::Contains("generator failed at"), error);
}

TEST_CASE("membership in the extension") {
    const auto grid = make_grid(4, 32);
    const auto family = parabola_family(grid);
    const int horizons[] = {1, 2, 3, 4};

    // A bundle drawn from the family itself: gap exactly zero. The net
    // point is computed exactly the way the sampler computes it.
    const auto self = parabola_bundle(grid, (50 + 0.5) * 1.0 / 100);
    SUBCASE("drawn member") {
        const auto rep = closure_family(family, {1e-2, 1e-6, 48});
        bool hit = false;
        for (const auto& s : rep.sampled)
            if (hausdorff_sup(s, self, 4) == 0.0) hit = true;
        CHECK(hit);
        const auto res = member_of_extension(self, family, horizons, 1e-2, {1e-2, 1e-6, 48});
        CHECK(res.member);
        CHECK(res.gaps.at(4) == 0.0);
    }

    SUBCASE("constant 1 accepted, constant 2 rejected") {
        const Bundle one({Trajectory::constant(grid, 1.0)});
        const auto yes = member_of_extension(one, family, horizons, 1e-2, {1e-3, 1e-6, 48});
        CHECK(yes.member);
        for (const auto& [n, g] : yes.gaps) CHECK(g <= 1e-2);

        const Bundle two({Trajectory::constant(grid, 2.0)});
        const auto no = member_of_extension(two, family, horizons, 1e-2, {1e-3, 1e-6, 48});
        CHECK_FALSE(no.member);
        CHECK(no.gaps.at(1) >= 0.9);
    }
}

TEST_CASE("projective consistency of the closure") {
    // Closing then restricting lands near restricting then closing; the two
    // nets coincide pointwise, so the distance is bounded by the net
    // spacing times the generator's modulus.
    const auto grid = make_grid(4, 16);
    const auto rep4 = closure_family(parabola_family(grid), {1e-2, 1e-6, 48});
    const auto rep2 = closure_family(parabola_family(make_grid(2, 16)), {1e-2, 1e-6, 48});

    double worst = 0.0;
    for (const auto& a : rep4.closed()) {
        const auto ra = restrict_bundle(a, 2);
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& b : rep2.closed())
            nearest = std::min(nearest, hausdorff_sup(ra, b, 2));
        worst = std::max(worst, nearest);
    }
    // Lipschitz constant of p -> y_p at horizon 2 is ~2, net spacing 1e-2.
    CHECK(worst <= 2.0 * 1e-2 * 2.0);
}
