#include "evlab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <random>

#include "evlab/errors.hpp"
#include "evlab/fixtures.hpp"
#include "evlab/io.hpp"
#include "evlab/numfmt.hpp"

namespace evlab {

namespace {

namespace fs = std::filesystem;

ClosureParams closure_params(const ExperimentConfig& cfg) {
    return {cfg.net_eps, cfg.cluster_tol, 48};
}

Fixture resolve_fixture(const ExperimentConfig& cfg, const char* fallback) {
    const std::string name = cfg.fixture.empty() ? fallback : cfg.fixture;
    std::optional<TimeGrid> grid;
    if (cfg.horizon > 0 || cfg.steps_per_unit > 0) {
        const auto g0 = fixture_default_grid(name);
        if (!g0) throw error("unknown fixture '" + name + "'");
        grid = make_grid(cfg.horizon > 0 ? cfg.horizon : g0->horizon,
                         cfg.steps_per_unit > 0 ? cfg.steps_per_unit : g0->steps_per_unit);
    }
    auto f = fixture_by_name(name, grid, cfg.seed);
    if (!f) throw error("unknown fixture '" + name + "'");
    if (!cfg.eps_list.empty()) f->eps_list = cfg.eps_list;
    if (!cfg.horizons.empty()) f->horizons = cfg.horizons;
    f->closure = closure_params(cfg);
    f->strategy.seed = cfg.seed;
    return std::move(*f);
}

void put_common(Report& rep, const ExperimentConfig& cfg, const Fixture* f) {
    if (f) rep.put("fixture", f->name);
    rep.put("seed", static_cast<long long>(cfg.seed));
    rep.put("net_eps", cfg.net_eps);
    rep.put("cluster_tol", cfg.cluster_tol);
}

void put_closure(Report& rep, const ClosureReport& closure) {
    rep.begin_section("closure");
    rep.put("sampled", closure.sampled.size());
    rep.put("appended", closure.appended.size());
    for (std::size_t i = 0; i < closure.appended.size(); ++i)
        rep.put("appended_" + std::to_string(i), closure.appended[i].label());
    for (std::size_t i = 0; i < closure.runs.size(); ++i) {
        const auto& r = closure.runs[i];
        rep.put("face_" + std::to_string(i),
                "axis=" + std::to_string(r.axis) + (r.upper ? " side=hi" : " side=lo") +
                    " cauchy=" + (r.cauchy ? "true" : "false") +
                    " final_step=" + format_number(r.final_step) +
                    " appended=" + (r.appended ? "true" : "false"));
    }
    double max_gap = 0.0;
    for (const auto& [n, g] : closure.horizon_gap) {
        rep.put("gap_" + std::to_string(n), g);
        max_gap = std::max(max_gap, g);
    }
    rep.put("max_gap", max_gap);
}

void put_evasion(Report& rep, const EvasionReport& ev) {
    rep.begin_section("values");
    for (const auto& [n, v] : ev.values.value) rep.put("value_" + std::to_string(n), v);
    rep.put("infinite_up_to_horizon", ev.values.infinite_up_to_horizon);
    rep.begin_section("exact");
    rep.put("exact", ev.exact.exact);
    rep.put("margin", ev.exact.margin);
    rep.put("certified_horizon", ev.exact.certified_horizon);
    if (ev.exact.witness) {
        rep.put("witness_index", *ev.exact.witness);
        rep.put("witness_clearance", ev.exact.witness_clearance);
    }
    rep.begin_section("robust");
    rep.put("robust", ev.robust.robust);
    if (ev.robust.witness_eps) rep.put("witness_eps", *ev.robust.witness_eps);
    for (const auto& [eps, ok] : ev.robust.per_eps)
        rep.put("eps_" + format_number(eps), ok);
}

struct Pipeline {
    Report report;
    int exit_code = 0;
    std::string summary;
    std::vector<std::pair<std::string, Bundle>> dumps;
};

Pipeline run_metric_suite(const ExperimentConfig& cfg) {
    const int horizon = cfg.horizon > 0 ? cfg.horizon : 4;
    const int steps = cfg.steps_per_unit > 0 ? cfg.steps_per_unit : 32;
    const TimeGrid grid = make_grid(horizon, steps);
    const int triples = 200;

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    auto random_traj = [&](int dim) {
        Trajectory x(grid, dim);
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < x.nodes(); ++k) x.at(k, j) = u(rng);
        return x;
    };

    double sym = 0.0, tri = 0.0, tail = 0.0, restr = 0.0, ident = 0.0;
    double h_sym = 0.0, h_tri = 0.0, h_ident = 0.0;
    for (int rep_i = 0; rep_i < triples; ++rep_i) {
        const int dim = 1 + rep_i % 3;
        const auto x = random_traj(dim);
        const auto y = random_traj(dim);
        const auto z = random_traj(dim);
        for (int n = 1; n <= horizon; ++n) {
            const double xy = sup_distance(x, y, n);
            sym = std::max(sym, std::abs(xy - sup_distance(y, x, n)));
            tri = std::max(tri, xy - sup_distance(x, z, n) - sup_distance(z, y, n));
        }
        const double cxy = co_metric(x, y);
        ident = std::max(ident, co_metric(x, x));
        sym = std::max(sym, std::abs(cxy - co_metric(y, x)));
        tri = std::max(tri, cxy - co_metric(x, z) - co_metric(z, y));
        for (int k = 1; k <= horizon; ++k)
            tail = std::max(tail, cxy - (std::ldexp(1.0, -k) + sup_distance(x, y, k)));
        for (int n = 1; n < horizon; ++n)
            restr = std::max(restr, sup_distance(restrict_to(x, n), restrict_to(y, n), n) -
                                        sup_distance(x, y, horizon));

        // Small bundles from the same generator.
        auto random_bundle = [&](int count) {
            std::vector<Trajectory> ms;
            for (int i = 0; i < count; ++i) ms.push_back(random_traj(dim));
            return Bundle(std::move(ms));
        };
        const auto a = random_bundle(1 + rep_i % 3);
        const auto b = random_bundle(1 + (rep_i + 1) % 3);
        const auto c = random_bundle(1 + (rep_i + 2) % 3);
        h_ident = std::max(h_ident, hausdorff_sup(a, a, horizon));
        h_ident = std::max(h_ident, hausdorff_co(a, a));
        h_sym = std::max(h_sym, std::abs(hausdorff_sup(a, b, horizon) -
                                         hausdorff_sup(b, a, horizon)));
        h_tri = std::max(h_tri, hausdorff_sup(a, b, horizon) -
                                    hausdorff_sup(a, c, horizon) -
                                    hausdorff_sup(c, b, horizon));
        h_tri = std::max(h_tri, hausdorff_co(a, b) - hausdorff_co(a, c) - hausdorff_co(c, b));
    }

    Pipeline p{Report("metric-suite"), 0, "", {}};
    put_common(p.report, cfg, nullptr);
    p.report.put("horizon", horizon);
    p.report.put("steps_per_unit", steps);
    p.report.begin_section("metrics");
    p.report.put("triples", triples);
    p.report.put("identity_violation", ident);
    p.report.put("symmetry_violation", sym);
    p.report.put("triangle_violation", tri);
    p.report.put("tail_bound_violation", tail);
    p.report.put("restriction_violation", restr);
    p.report.put("hausdorff_identity_violation", h_ident);
    p.report.put("hausdorff_symmetry_violation", h_sym);
    p.report.put("hausdorff_triangle_violation", h_tri);
    const double worst = std::max({ident, sym, tri, tail, restr, h_ident, h_sym, h_tri});
    const bool pass = worst <= 1e-12;
    p.report.begin_section("verdict");
    p.report.put("worst_violation", worst);
    p.report.put("pass", pass);
    p.exit_code = pass ? 0 : 2;
    p.summary = "metric-suite: " + std::string(pass ? "pass" : "FAIL") +
                " (worst violation " + format_number(worst) + ")";
    return p;
}

Pipeline run_maximin(const ExperimentConfig& cfg) {
    const Fixture f = resolve_fixture(cfg, "example2");
    const auto closure = closure_family(f.family, f.closure);
    const auto value = maximin(closure.sampled, f.cost);

    Pipeline p{Report("maximin"), 0, "", {}};
    put_common(p.report, cfg, &f);
    p.report.begin_section("game");
    p.report.put("cost", f.cost.name());
    p.report.put("sampled", closure.sampled.size());
    p.report.put("value", value.value);
    p.report.put("attained", value.attained);
    if (value.bundle_index) p.report.put("witness_bundle", *value.bundle_index);
    if (value.trajectory_index) p.report.put("witness_trajectory", *value.trajectory_index);
    p.report.put("witness_label", value.bundle_label);
    p.summary = "maximin " + f.name + ": value " + format_number(value.value);
    if (cfg.dump_trajectories && value.bundle_index)
        p.dumps.emplace_back("witness", closure.sampled[*value.bundle_index]);
    return p;
}

Pipeline run_extend(const ExperimentConfig& cfg) {
    const Fixture f = resolve_fixture(cfg, "example2");
    const auto closure = closure_family(f.family, f.closure);

    Pipeline p{Report("extend"), 0, "", {}};
    put_common(p.report, cfg, &f);
    put_closure(p.report, closure);
    p.summary = "extend " + f.name + ": " + std::to_string(closure.sampled.size()) +
                " sampled, " + std::to_string(closure.appended.size()) + " appended";
    if (cfg.dump_trajectories)
        for (std::size_t i = 0; i < closure.appended.size(); ++i)
            p.dumps.emplace_back("appended" + std::to_string(i), closure.appended[i]);
    return p;
}

Pipeline run_pursuit(const ExperimentConfig& cfg) {
    const Fixture f = resolve_fixture(cfg, "example2");
    const auto closure = closure_family(f.family, f.closure);
    const auto ev = classify_evasion(closure.sampled, f.target, f.eps_list, f.horizons, 0.0);

    Pipeline p{Report("pursuit"), 0, "", {}};
    put_common(p.report, cfg, &f);
    p.report.put("target", f.target.description);
    put_evasion(p.report, ev);
    p.summary = "pursuit " + f.name + ": exact=" + (ev.exact.exact ? "true" : "false") +
                " robust=" + (ev.robust.robust ? "true" : "false");
    return p;
}

Pipeline run_theorem1(const ExperimentConfig& cfg) {
    const Fixture f = resolve_fixture(cfg, "example2");
    const auto agreement = extension_agreement(f.family, f.cost, cfg.agreement_tol, f.closure);

    Pipeline p{Report("theorem1"), 0, "", {}};
    put_common(p.report, cfg, &f);
    p.report.begin_section("agreement");
    p.report.put("cost", f.cost.name());
    p.report.put("original_value", agreement.original_value);
    p.report.put("extended_value", agreement.extended_value);
    p.report.put("attained", agreement.attained);
    p.report.put("extended_witness", agreement.extended.bundle_label);
    p.report.put("extended_witness_appended", agreement.extended.witness_appended);
    p.report.put("original_witness", agreement.original.bundle_label);
    p.report.put("gap", agreement.gap);
    p.report.put("tol", cfg.agreement_tol);
    p.report.put("resolution_bound", agreement.resolution_bound);
    p.report.put("agree", agreement.agree);
    p.exit_code = agreement.agree ? 0 : 2;
    p.summary = "theorem1 " + f.name + ": " + (agreement.agree ? "AGREE" : "DISAGREE") +
                " (original " + format_number(agreement.original_value) + ", extended " +
                format_number(agreement.extended_value) + ")";
    return p;
}

Pipeline run_theorem2(const ExperimentConfig& cfg) {
    const Fixture f = resolve_fixture(cfg, "example2");
    const auto eq = exactness_robustness_check(f.family, f.target, f.eps_list, f.horizons,
                                               f.closure);

    Pipeline p{Report("theorem2"), 0, "", {}};
    put_common(p.report, cfg, &f);
    p.report.put("target", f.target.description);
    p.report.begin_section("equivalence");
    p.report.put("robust_original", eq.robust_original);
    if (eq.robust.witness_eps) p.report.put("robust_witness_eps", *eq.robust.witness_eps);
    p.report.put("exact_extended", eq.exact_extended);
    p.report.put("margin", eq.margin);
    if (eq.extended_exact.witness) {
        p.report.put("extended_witness_index", *eq.extended_exact.witness);
        p.report.put("extended_witness_clearance", eq.extended_exact.witness_clearance);
        p.report.put("extended_witness_appended",
                     *eq.extended_exact.witness >= eq.closure.sampled.size());
    }
    p.report.put("exact_original_margin0", eq.original_exact.exact);
    p.report.put("certified_horizon", eq.extended_exact.certified_horizon);
    p.report.put("agree", eq.agree);
    put_closure(p.report, eq.closure);
    p.exit_code = eq.agree ? 0 : 2;
    p.summary = "theorem2 " + f.name + ": " + (eq.agree ? "AGREE" : "DISAGREE") +
                " (robust=" + (eq.robust_original ? "true" : "false") + ", extended exact=" +
                (eq.exact_extended ? "true" : "false") + ")";
    if (cfg.dump_trajectories && eq.extended_exact.witness) {
        const auto closed = eq.closure.closed();
        p.dumps.emplace_back("extended-witness", closed[*eq.extended_exact.witness]);
    }
    return p;
}

Pipeline run_relaxed(const ExperimentConfig& cfg) {
    Fixture f = resolve_fixture(cfg, "bilinear");
    if (!f.dynamics) throw error("fixture '" + f.name + "' has no dynamics");
    if (!cfg.nu_file.empty()) {
        std::ifstream in(cfg.nu_file);
        if (!in) throw error("cannot open nu file: " + cfg.nu_file);
        NuMeasure nu = read_nu(in);
        if (!(nu.grid() == f.nus.front().grid()) ||
            nu.q_count() != f.dynamics->q_atoms.size())
            throw error("nu file does not match the fixture grid or atoms");
        f.nus.push_back(std::move(nu));
    }
    const auto check = relaxed_game_check(*f.dynamics, f.target, f.nus, f.eps_list,
                                          f.horizons, f.strategy);

    Pipeline p{Report("relaxed"), 0, "", {}};
    put_common(p.report, cfg, &f);
    p.report.put("dynamics", f.dynamics->name);
    p.report.put("nus", f.nus.size());
    p.report.begin_section("equivalence");
    p.report.put("robust_original", check.equivalence.robust_original);
    p.report.put("exact_extended", check.equivalence.exact_extended);
    p.report.put("margin", check.equivalence.margin);
    p.report.put("closure_gap", check.closure_gap);
    p.report.put("agree", check.agree);
    p.report.begin_section("continuity");
    p.report.put("monotone", check.continuity.monotone);
    for (const auto& row : check.continuity.rows)
        p.report.put("delta_" + format_number(row.requested_delta),
                     "tv=" + format_number(row.realized_tv) +
                         " shift=" + format_number(row.shift) +
                         " bound=" + format_number(row.bound));
    p.exit_code = check.agree ? 0 : 2;
    p.summary = "relaxed " + f.name + ": " + (check.agree ? "AGREE" : "DISAGREE") +
                " (closure gap " + format_number(check.closure_gap) + ")";
    return p;
}

std::string timestamp_utc() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%S", &tm);
    return buf;
}

fs::path pick_report_path(const ExperimentConfig& cfg) {
    std::string base = cfg.command;
    if (!cfg.fixture.empty()) base += "-" + cfg.fixture;
    if (!cfg.check.empty()) base += "-" + cfg.check;
    base += "-seed" + std::to_string(cfg.seed) + "-" + timestamp_utc();
    const fs::path dir(cfg.out_dir.empty() ? "." : cfg.out_dir);
    fs::create_directories(dir);
    for (int k = 0;; ++k) {
        fs::path candidate = dir / (base + (k ? "-" + std::to_string(k) : "") + ".txt");
        if (!fs::exists(candidate)) return candidate;
    }
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);

    ExperimentConfig effective = cfg;
    if (cfg.command == "fixture") {
        if (cfg.fixture.empty()) throw error("fixture command needs a fixture name");
        effective.command = cfg.check.empty() ? "theorem2" : cfg.check;
        if (effective.command == "fixture")
            throw error("fixture check cannot be 'fixture'");
        validate_config(effective);
    }

    Pipeline p = [&] {
        const auto& cmd = effective.command;
        if (cmd == "metric-suite") return run_metric_suite(effective);
        if (cmd == "maximin") return run_maximin(effective);
        if (cmd == "extend") return run_extend(effective);
        if (cmd == "pursuit") return run_pursuit(effective);
        if (cmd == "theorem1") return run_theorem1(effective);
        if (cmd == "theorem2") return run_theorem2(effective);
        if (cmd == "relaxed") return run_relaxed(effective);
        throw error("unknown command '" + cmd + "'");
    }();

    const fs::path path = pick_report_path(cfg);
    p.report.save(path.string());
    for (const auto& [tag, bundle] : p.dumps) {
        fs::path dir = path;
        dir.replace_extension();
        write_bundle_dump(dir.string() + "-" + tag, bundle);
    }
    return {p.exit_code, path.string(), std::move(p.report), std::move(p.summary)};
}

}  // namespace evlab
