// Acceptance suite: one line per criterion, every tolerance pinned in the
// assertions below. Exits nonzero if any criterion fails. Pass --cli
// <path-to-evlab> so the determinism criterion can drive the real binary.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "evlab/config.hpp"
#include "evlab/family.hpp"
#include "evlab/fixtures.hpp"
#include "evlab/game.hpp"
#include "evlab/kernels.hpp"
#include "evlab/numfmt.hpp"
#include "evlab/pursuit.hpp"
#include "evlab/relaxed.hpp"
#include "evlab/report.hpp"
#include "evlab/runner.hpp"

using namespace evlab;
namespace fs = std::filesystem;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what) {
    if (!cond) throw Failure(what);
}

std::string cli_path;
fs::path work_dir;
int failures = 0;

void criterion(int id, const std::string& label, double time_limit_s,
               const std::function<std::string()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    std::string why;
    try {
        detail = body();
    } catch (const std::exception& e) {
        ok = false;
        why = e.what();
    }
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && time_limit_s > 0 && dt >= time_limit_s) {
        ok = false;
        why = "runtime " + format_number(dt) + " s exceeds " +
              format_number(time_limit_s) + " s";
    }
    if (ok) {
        std::cout << "[PASS] criterion " << id << ": " << label;
        if (!detail.empty()) std::cout << " — " << detail;
        std::cout << " (" << format_number(dt) << " s";
        if (time_limit_s > 0) std::cout << " < " << format_number(time_limit_s) << " s";
        std::cout << ")\n";
    } else {
        ++failures;
        std::cout << "[FAIL] criterion " << id << ": " << label << " — " << why << "\n";
    }
}

// ---- criterion 1: metric axioms at scale -------------------------------

std::string run_criterion_1() {
    ExperimentConfig cfg;
    cfg.command = "metric-suite";
    cfg.horizon = 4;
    cfg.steps_per_unit = 32;
    cfg.seed = 2024;
    cfg.out_dir = (work_dir / "c1").string();
    const auto res = run_experiment(cfg);
    const auto worst = parse_number(res.report.find("verdict", "worst_violation").value_or("nan"));
    require(res.exit_code == 0, "metric suite reported a violation");
    require(worst && *worst <= 1e-12,
            "worst violation " + format_number(worst.value_or(-1.0)) + " > 1e-12");
    return "200 triples, worst violation " + format_number(*worst);
}

// ---- criterion 2: the extension attains the limit value ----------------

std::string run_criterion_2() {
    const auto f = example2();  // grid 8 x 1/64
    const ClosureParams params{1e-3, 1e-6, 48};
    const auto ext = extended_maximin(f.family, f.cost, params);

    require(ext.value.attained, "extended maximin not attained");
    require(std::abs(ext.value.value - 1.0) <= 1e-6,
            "extended value " + format_number(ext.value.value) + " is not 1.0");
    require(ext.value.witness_appended, "witness is not an appended closure limit");

    const auto closed = ext.closure.closed();
    const auto& witness = closed[*ext.value.bundle_index];
    for (const auto& x : witness.members())
        for (int k = 0; k < x.nodes(); ++k)
            require(std::abs(x.at(k, 0) - 1.0) <= 1e-6, "witness is not the constant 1");

    const auto sampled = maximin(ext.closure.sampled, f.cost);
    require(sampled.value >= 0.98 && sampled.value < 1.0,
            "sampled supremum " + format_number(sampled.value) + " outside [0.98, 1)");
    require(std::abs(ext.value.value - sampled.value) <= 2e-2,
            "extension moved the value by more than 2e-2");
    return "extended 1.0 at the appended constant bundle, sampled sup " +
           format_number(sampled.value);
}

// ---- criterion 3: membership in the extension --------------------------

std::string run_criterion_3() {
    const auto f = example2();
    const ClosureParams params{1e-3, 1e-6, 48};
    const int horizons[] = {1, 2, 3, 4};
    const auto grid = make_grid(8, 64);

    const Bundle one({Trajectory::constant(grid, 1.0)});
    const auto accepted = member_of_extension(one, f.family, horizons, 1e-2, params);
    require(accepted.member, "constant-1 bundle rejected");
    double worst_gap = 0.0;
    for (const auto& [n, g] : accepted.gaps) worst_gap = std::max(worst_gap, g);
    require(worst_gap <= 1e-2, "constant-1 gap " + format_number(worst_gap) + " > 1e-2");

    const Bundle two({Trajectory::constant(grid, 2.0)});
    const auto rejected = member_of_extension(two, f.family, horizons, 1e-2, params);
    require(!rejected.member, "constant-2 bundle accepted");
    double min_gap = kNever;
    for (const auto& [n, g] : rejected.gaps) min_gap = std::min(min_gap, g);
    require(min_gap >= 0.9, "constant-2 gap " + format_number(min_gap) + " < 0.9");
    return "gaps: constant-1 " + format_number(worst_gap) + ", constant-2 " +
           format_number(min_gap);
}

// ---- criterion 4: exactness vs robustness on both examples -------------

std::string check_example1() {
    const auto f = example1();
    const auto eq = exactness_robustness_check(f.family, f.target, f.eps_list, f.horizons,
                                               f.closure);
    require(eq.original_exact.exact, "example1: original exactness lost");
    require(!eq.robust_original, "example1: robustness should fail");
    require(!eq.exact_extended, "example1: extended exactness should fail");
    require(eq.agree, "example1: verdict disagrees");
    return "example1 agree (exact, not robust, extension not exact)";
}

std::string check_example2() {
    const auto f = example2();
    const auto eq = exactness_robustness_check(f.family, f.target, f.eps_list, f.horizons,
                                               f.closure);
    require(eq.robust_original, "example2: robustness lost");
    require(eq.robust.per_eps.at(0.1), "example2: inflation 0.1 not survived");
    require(eq.exact_extended, "example2: extended exactness lost");
    require(eq.extended_exact.witness_clearance >= 0.5,
            "example2: witness clearance below 0.5");
    require(eq.extended_exact.witness_clearance >= *eq.robust.witness_eps,
            "example2: clearance below the witnessing inflation");
    require(*eq.extended_exact.witness >= eq.closure.sampled.size(),
            "example2: witness is not the appended bundle");
    require(eq.agree, "example2: verdict disagrees");
    return "example2 agree (robust at 0.1, extension exact with clearance >= 0.5)";
}

// ---- criterion 5: relaxed-control integration oracles ------------------

std::string run_criterion_5() {
    // Dirac reduction: bit-identical to classical Euler.
    const auto grid = make_grid(2, 64);
    Dynamics dyn = linear_sum_dynamics({0.5}, {-1.0, 1.0}, {-1.0, 1.0});
    const auto nu = NuMeasure::dirac(grid, 2, 1);
    const auto eta = EtaMeasure::from_selection(nu, 2, [](int c, std::size_t) {
        return static_cast<std::size_t>((c / 3) % 2);
    });
    const auto x = traj_of_eta(eta, dyn);
    {
        double state = 0.5;
        const double h = grid.step();
        require(x.at(0, 0) == state, "dirac reduction differs at the start");
        for (int k = 0; k < grid.cell_count(); ++k) {
            const double u = ((k / 3) % 2 == 0) ? -1.0 : 1.0;
            const double f = u + 1.0;
            state = state + h * f;
            require(x.at(k + 1, 0) == state,
                    "dirac reduction differs at step " + std::to_string(k + 1));
        }
    }

    // Uniform symmetric measure freezes the state with error exactly 0.
    const auto uniform_eta = EtaMeasure::from_kernels(
        NuMeasure::uniform(grid, 2), 2, [](int, std::size_t, std::size_t) { return 0.5; });
    const auto frozen = traj_of_eta(uniform_eta, dyn);
    for (int k = 0; k < frozen.nodes(); ++k)
        require(frozen.at(k, 0) == 0.5, "uniform symmetry broke at node " + std::to_string(k));

    // Euler order: terminal error halves within [1.7, 2.3] against x0*e^t.
    Dynamics expo = scalar_bilinear_dynamics(1.0, 1.0, {0.0}, {0.0});
    auto terminal_error = [&](int steps) {
        const auto g = make_grid(2, steps);
        const auto d = NuMeasure::dirac(g, 1, 0);
        const auto e = EtaMeasure::from_selection(d, 1, [](int, std::size_t) {
            return std::size_t{0};
        });
        const auto t = traj_of_eta(e, expo);
        return std::abs(t.at(t.nodes() - 1, 0) - std::exp(2.0));
    };
    const double r1 = terminal_error(32) / terminal_error(64);
    const double r2 = terminal_error(64) / terminal_error(128);
    require(r1 > 1.7 && r1 < 2.3, "error ratio " + format_number(r1) + " outside [1.7, 2.3]");
    require(r2 > 1.7 && r2 < 2.3, "error ratio " + format_number(r2) + " outside [1.7, 2.3]");
    return "dirac bit-exact, symmetry error 0, halving ratios " + format_number(r1) + ", " +
           format_number(r2);
}

// ---- criterion 6: measure consistency ----------------------------------

std::string run_criterion_6() {
    const auto grid = make_grid(2, 4);
    const auto nu = NuMeasure::uniform(grid, 3);
    const auto etas = consistent_etas(nu, 3, SelectionStrategy::sampled(1000, 77));
    require(etas.size() == 1000, "expected 1000 sampled etas");
    double worst = 0.0;
    for (const auto& eta : etas) worst = std::max(worst, eta.marginal_error(nu));
    require(worst <= 1e-15, "marginal violation " + format_number(worst) + " > 1e-15");

    // Enumeration oracle on one cell: (#P)^(#Q) distinct extreme points.
    const auto cell = make_grid(1, 1);
    for (std::size_t atoms : {std::size_t{2}, std::size_t{3}}) {
        const auto unu = NuMeasure::uniform(cell, atoms);
        const auto all = consistent_etas(unu, atoms, SelectionStrategy::all());
        std::size_t expected = 1;
        for (std::size_t q = 0; q < atoms; ++q) expected *= atoms;
        require(all.size() == expected,
                std::to_string(atoms) + " atoms: got " + std::to_string(all.size()) +
                    " selections, expected " + std::to_string(expected));
        std::set<std::vector<double>> distinct;
        for (const auto& eta : all) {
            require(eta.marginal_error(unu) == 0.0, "extreme point not marginally exact");
            std::vector<double> t;
            for (std::size_t p = 0; p < atoms; ++p)
                for (std::size_t q = 0; q < atoms; ++q) t.push_back(eta.weight(0, p, q));
            distinct.insert(t);
        }
        require(distinct.size() == expected, "enumerated selections are not distinct");
    }
    return "1000 etas within 1e-15; per-cell counts 4 and 27 match the oracle";
}

// ---- criterion 7: continuity probe --------------------------------------

std::string run_criterion_7() {
    const auto grid = make_grid(2, 4);
    Dynamics dyn = linear_sum_dynamics({1.0}, {-1.0, 0.0, 1.0}, {-1.0, 0.0, 1.0});
    const auto nu = NuMeasure::uniform(grid, 3);
    const double deltas[] = {0.1, 0.05, 0.025};
    const auto table = continuity_probe(nu, dyn, deltas, SelectionStrategy::sampled(3, 5));

    require(table.monotone, "shift table is not monotone");
    require(table.rows[0].shift > 0.0, "probe produced no shift");
    const double r1 = table.rows[0].shift / table.rows[1].shift;
    const double r2 = table.rows[1].shift / table.rows[2].shift;
    require(r1 >= 1.8, "halving ratio " + format_number(r1) + " < 1.8");
    require(r2 >= 1.8, "halving ratio " + format_number(r2) + " < 1.8");
    for (const auto& row : table.rows)
        require(row.shift <= row.bound,
                "shift " + format_number(row.shift) + " above the bound " +
                    format_number(row.bound));
    return "monotone, ratios " + format_number(r1) + ", " + format_number(r2) +
           ", all below the growth bound";
}

// ---- criterion 8: the measure game is its own closure -------------------

std::string run_criterion_8() {
    const auto f = bilinear_system();
    require(f.strategy.cap == 6561, "selection cap is not 3^8");
    // Dirac measures enumerate, the uniform one falls back to sampling.
    require(selection_count(f.nus[0], 3, f.strategy.cap) == 729,
            "dirac nu should enumerate 3^6 selections");
    require(selection_count(f.nus[3], 3, f.strategy.cap) > f.strategy.cap,
            "uniform nu unexpectedly enumerable");

    const auto check = relaxed_game_check(*f.dynamics, f.target, f.nus, f.eps_list,
                                          f.horizons, f.strategy);
    require(check.closure_gap <= 1e-2,
            "closure gap " + format_number(check.closure_gap) + " > membership tol");
    require(check.equivalence.robust_original, "robustness lost");
    require(check.equivalence.exact_extended, "exactness lost");
    require(check.agree, "verdict disagrees");
    require(check.continuity.monotone, "continuity evidence not monotone");
    return "closure adds nothing, exact == robust up to horizon 6, agree";
}

// ---- criterion 9: byte-identical reruns ---------------------------------

std::string sh(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    if (rc != 0) throw Failure("command failed (" + std::to_string(rc) + "): " + cmd);
    return cmd;
}

std::string report_path_from(const fs::path& stdout_file) {
    std::ifstream in(stdout_file);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind("report: ", 0) == 0) return line.substr(8);
    throw Failure("no report path in " + stdout_file.string());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string run_criterion_9() {
    require(!cli_path.empty(), "pass --cli <path-to-evlab>");
    const fs::path dir = work_dir / "c9";
    fs::create_directories(dir);

    std::vector<std::string> paths;
    for (int run = 0; run < 2; ++run) {
        const fs::path out = dir / ("run" + std::to_string(run));
        const fs::path log = dir / ("log" + std::to_string(run) + ".txt");
        sh("'" + cli_path + "' fixture example2 theorem2 --seed 7 --net-eps 0.005 --out '" +
           out.string() + "' > '" + log.string() + "'");
        paths.push_back(report_path_from(log));
    }
    require(read_file(paths[0]) == read_file(paths[1]),
            "theorem2 reports differ byte-wise");
    const auto d1 = report_diff(Report::load(paths[0]), Report::load(paths[1]), 0.0);
    require(d1.same, "report_diff: " + d1.detail);

    paths.clear();
    for (int run = 0; run < 2; ++run) {
        const fs::path out = dir / ("relaxed" + std::to_string(run));
        const fs::path log = dir / ("rlog" + std::to_string(run) + ".txt");
        sh("'" + cli_path + "' relaxed bilinear --seed 5 --out '" + out.string() + "' > '" +
           log.string() + "'");
        paths.push_back(report_path_from(log));
    }
    require(read_file(paths[0]) == read_file(paths[1]),
            "relaxed reports differ byte-wise");
    return "theorem2 and relaxed reruns byte-identical";
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--cli") cli_path = argv[i + 1];

    work_dir = fs::temp_directory_path() /
               ("evlab-acceptance-" + std::to_string(static_cast<long long>(std::random_device{}())));
    fs::create_directories(work_dir);

    std::cout << "kernels: " << kernels::backend_name(kernels::active_backend()) << "\n";

    criterion(1, "metric axioms within 1e-12 on 200 random triples", 5.0, run_criterion_1);
    criterion(2, "extension attains 1.0 on the shrinking-parabola family", 10.0,
              run_criterion_2);
    criterion(3, "extension membership accepts constant-1 and rejects constant-2", 10.0,
              run_criterion_3);
    criterion(4, "exactness/robustness agreement on example1", 10.0, check_example1);
    criterion(4, "exactness/robustness agreement on example2", 10.0, check_example2);
    criterion(5, "relaxed integration oracles (dirac, symmetry, euler order)", 10.0,
              run_criterion_5);
    criterion(6, "eta consistency to 1e-15 and selection counting", 10.0, run_criterion_6);
    criterion(7, "hausdorff continuity probe shrinks within the bound", 10.0,
              run_criterion_7);
    criterion(8, "measure game: closure adds nothing, exact == robust", 60.0,
              run_criterion_8);
    criterion(9, "byte-identical reports on rerun", 30.0, run_criterion_9);

    std::error_code ec;
    fs::remove_all(work_dir, ec);

    if (failures == 0) {
        std::cout << "all acceptance criteria passed\n";
        return 0;
    }
    std::cout << failures << " criterion(s) failed\n";
    return 1;
}
