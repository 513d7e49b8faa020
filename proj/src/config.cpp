#include "evlab/config.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "evlab/errors.hpp"
#include "evlab/numfmt.hpp"

namespace evlab {

namespace {

constexpr std::array kCommands = {"metric-suite", "maximin", "extend", "pursuit",
                                  "theorem1", "theorem2", "relaxed", "fixture"};

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> parts;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    return parts;
}

double need_number(const std::string& v, std::size_t lineno) {
    const auto n = parse_number(v);
    if (!n) throw parse_error("expected a number, got '" + v + "'", lineno);
    return *n;
}

long long need_integer(const std::string& v, std::size_t lineno) {
    const double d = need_number(v, lineno);
    const auto i = static_cast<long long>(d);
    if (static_cast<double>(i) != d)
        throw parse_error("expected an integer, got '" + v + "'", lineno);
    return i;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);

        const auto colon = line.find(':');
        if (colon == std::string::npos)
            throw parse_error("expected 'key: value'", lineno);
        std::string key = line.substr(0, colon);
        std::string value = line.substr(colon + 1);
        const auto ke = key.find_last_not_of(" \t");
        key = key.substr(0, ke + 1);
        const auto vb = value.find_first_not_of(" \t");
        value = vb == std::string::npos ? "" : value.substr(vb);
        if (value.empty()) throw parse_error("empty value for '" + key + "'", lineno);

        if (key == "command") cfg.command = value;
        else if (key == "fixture") cfg.fixture = value;
        else if (key == "check") cfg.check = value;
        else if (key == "horizon") cfg.horizon = static_cast<int>(need_integer(value, lineno));
        else if (key == "steps_per_unit")
            cfg.steps_per_unit = static_cast<int>(need_integer(value, lineno));
        else if (key == "net_eps") cfg.net_eps = need_number(value, lineno);
        else if (key == "cluster_tol") cfg.cluster_tol = need_number(value, lineno);
        else if (key == "membership_tol") cfg.membership_tol = need_number(value, lineno);
        else if (key == "agreement_tol") cfg.agreement_tol = need_number(value, lineno);
        else if (key == "eps_list") {
            cfg.eps_list.clear();
            for (const auto& s : split_list(value)) cfg.eps_list.push_back(need_number(s, lineno));
        } else if (key == "horizons") {
            cfg.horizons.clear();
            for (const auto& s : split_list(value))
                cfg.horizons.push_back(static_cast<int>(need_integer(s, lineno)));
        } else if (key == "seed")
            cfg.seed = static_cast<std::uint64_t>(need_integer(value, lineno));
        else if (key == "out") cfg.out_dir = value;
        else if (key == "nu_file") cfg.nu_file = value;
        else if (key == "dump_trajectories")
            cfg.dump_trajectories = value == "true" || value == "1";
        else
            throw parse_error("unknown key '" + key + "'", lineno);
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open config: " + path);
    return parse_config(in);
}

void validate_config(const ExperimentConfig& cfg) {
    if (std::find(kCommands.begin(), kCommands.end(), cfg.command) == kCommands.end())
        throw std::invalid_argument("unknown command '" + cfg.command + "'");
    if (!(cfg.net_eps > 0) || !(cfg.cluster_tol > 0) || !(cfg.membership_tol > 0) ||
        !(cfg.agreement_tol > 0))
        throw std::invalid_argument("tolerances must be positive");
    for (std::size_t i = 0; i < cfg.horizons.size(); ++i) {
        if (cfg.horizons[i] < 1)
            throw std::invalid_argument("horizons must be positive");
        if (i && cfg.horizons[i] <= cfg.horizons[i - 1])
            throw std::invalid_argument("horizons must be ascending");
    }
    for (std::size_t i = 0; i < cfg.eps_list.size(); ++i) {
        if (!(cfg.eps_list[i] > 0))
            throw std::invalid_argument("eps values must be positive");
        if (i && !(cfg.eps_list[i] < cfg.eps_list[i - 1]))
            throw std::invalid_argument("eps list must be descending");
    }
    if (cfg.horizon < 0 || cfg.steps_per_unit < 0)
        throw std::invalid_argument("grid overrides must be positive");
}

}  // namespace evlab
