// Batch experiment runner. Every subcommand executes one pipeline, writes a
// structured-text report into the output directory, prints a one-line
// verdict, and exits 0 on pass/agreement, 2 on a theorem disagreement, and
// 1 on any error. `diff` compares two reports field-wise.

#include <chrono>
#include <cstdlib>
#include <deque>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evlab/config.hpp"
#include "evlab/errors.hpp"
#include "evlab/kernels.hpp"
#include "evlab/numfmt.hpp"
#include "evlab/report.hpp"
#include "evlab/runner.hpp"

namespace {

struct CommandSetup {
    CLI::App* app = nullptr;
    std::string config_path;
    std::string eps_csv;
    std::string horizons_csv;
};

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto v = evlab::parse_number(item);
        if (!v) throw evlab::error("bad number in list: '" + item + "'");
        out.push_back(*v);
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    for (double v : parse_double_list(csv)) out.push_back(static_cast<int>(v));
    return out;
}

void add_run_flags(CommandSetup& s, evlab::ExperimentConfig& cfg) {
    s.app->add_option("--config", s.config_path, "Config file; explicit flags override it");
    s.app->add_option("--horizon", cfg.horizon, "Grid horizon override");
    s.app->add_option("--steps-per-unit", cfg.steps_per_unit, "Grid steps per unit override");
    s.app->add_option("--net-eps", cfg.net_eps, "Parameter net spacing");
    s.app->add_option("--cluster-tol", cfg.cluster_tol, "Cauchy tail threshold");
    s.app->add_option("--membership-tol", cfg.membership_tol, "Membership tolerance");
    s.app->add_option("--agreement-tol", cfg.agreement_tol, "Value agreement tolerance");
    s.app->add_option("--eps-list", s.eps_csv, "Descending target inflations, comma separated");
    s.app->add_option("--horizons", s.horizons_csv, "Ascending horizons, comma separated");
    s.app->add_option("--seed", cfg.seed, "Seed for sampled strategies");
    s.app->add_option("--out", cfg.out_dir, "Output directory (EVLAB_OUT overrides default)");
    s.app->add_option("--nu-file", cfg.nu_file, "Extra nu measure for the relaxed pipeline");
    s.app->add_flag("--dump", cfg.dump_trajectories, "Dump witness bundles as CSV");
}

// Flags the user typed win over the config file, which wins over defaults.
evlab::ExperimentConfig merge_config(const CommandSetup& s, const evlab::ExperimentConfig& flags) {
    evlab::ExperimentConfig cfg = flags;
    if (!s.config_path.empty()) {
        evlab::ExperimentConfig base = evlab::load_config(s.config_path);
        if (!flags.command.empty()) base.command = flags.command;
        if (!flags.fixture.empty()) base.fixture = flags.fixture;
        if (!flags.check.empty()) base.check = flags.check;
        auto touched = [&](const std::string& name) { return s.app->count(name) > 0; };
        if (touched("--horizon")) base.horizon = flags.horizon;
        if (touched("--steps-per-unit")) base.steps_per_unit = flags.steps_per_unit;
        if (touched("--net-eps")) base.net_eps = flags.net_eps;
        if (touched("--cluster-tol")) base.cluster_tol = flags.cluster_tol;
        if (touched("--membership-tol")) base.membership_tol = flags.membership_tol;
        if (touched("--agreement-tol")) base.agreement_tol = flags.agreement_tol;
        if (touched("--seed")) base.seed = flags.seed;
        if (touched("--out")) base.out_dir = flags.out_dir;
        if (touched("--nu-file")) base.nu_file = flags.nu_file;
        if (touched("--dump")) base.dump_trajectories = flags.dump_trajectories;
        cfg = base;
    }
    if (!s.eps_csv.empty()) cfg.eps_list = parse_double_list(s.eps_csv);
    if (!s.horizons_csv.empty()) cfg.horizons = parse_int_list(s.horizons_csv);
    if (s.app->count("--out") == 0) {
        if (const char* env = std::getenv("EVLAB_OUT")) cfg.out_dir = env;
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"evlab: a numerical laboratory for evasion games on trajectory bundles"};
    app.require_subcommand(1);

    evlab::ExperimentConfig cfg;
    // CLI11 keeps references to the bound strings, so the setups need
    // stable addresses for the lifetime of the app.
    std::deque<CommandSetup> setups;

    const std::vector<std::string> pipelines = {"metric-suite", "maximin", "extend",
                                                "pursuit", "theorem1", "theorem2", "relaxed"};
    for (const auto& name : pipelines) {
        CommandSetup& s = setups.emplace_back();
        s.app = app.add_subcommand(name, "Run the " + name + " pipeline");
        s.app->add_option("fixture", cfg.fixture, "Fixture name (example1, example2, bilinear)");
        add_run_flags(s, cfg);
    }
    {
        CommandSetup& s = setups.emplace_back();
        s.app = app.add_subcommand("fixture", "Run a named check on a fixture");
        s.app->add_option("name", cfg.fixture, "Fixture name")->required();
        s.app->add_option("check", cfg.check,
                          "maximin | extend | pursuit | theorem1 | theorem2 | relaxed");
        add_run_flags(s, cfg);
    }

    std::string diff_a, diff_b;
    double diff_tol = 0.0;
    CLI::App* diff_cmd = app.add_subcommand("diff", "Compare two reports field-wise");
    diff_cmd->add_option("a", diff_a)->required();
    diff_cmd->add_option("b", diff_b)->required();
    diff_cmd->add_option("--tol", diff_tol, "Numeric tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (diff_cmd->parsed()) {
            const auto a = evlab::Report::load(diff_a);
            const auto b = evlab::Report::load(diff_b);
            const auto res = evlab::report_diff(a, b, diff_tol);
            if (res.same) {
                std::cout << "same\n";
                return 0;
            }
            std::cout << "different: " << res.detail << "\n";
            return 1;
        }

        for (const auto& s : setups) {
            if (!s.app->parsed()) continue;
            evlab::ExperimentConfig flags = cfg;
            flags.command = s.app->get_name();
            const auto merged = merge_config(s, flags);

            const auto t0 = std::chrono::steady_clock::now();
            const auto result = evlab::run_experiment(merged);
            const auto dt = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0).count();
            std::cout << result.summary << "\n";
            std::cout << "report: " << result.report_path << "\n";
            std::cout << "kernels: "
                      << evlab::kernels::backend_name(evlab::kernels::active_backend())
                      << ", runtime: " << evlab::format_number(dt) << " s\n";
            return result.exit_code;
        }
        std::cerr << "error: no subcommand\n";
        return 1;
    } catch (const evlab::parse_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
