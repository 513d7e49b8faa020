#include "evlab/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "evlab/errors.hpp"
#include "evlab/numfmt.hpp"

namespace evlab {

namespace {
constexpr const char* kHeader = "evlab-report v1";
}

Report::Report(std::string command) : command_(std::move(command)) {
    entries_.push_back({"", "command", command_});
}

void Report::begin_section(std::string name) { current_section_ = std::move(name); }

void Report::put(const std::string& key, const std::string& value) {
    entries_.push_back({current_section_, key, value});
}
void Report::put(const std::string& key, const char* value) { put(key, std::string(value)); }
void Report::put(const std::string& key, double value) { put(key, format_number(value)); }
void Report::put(const std::string& key, long long value) { put(key, format_number(value)); }
void Report::put(const std::string& key, int value) { put(key, static_cast<long long>(value)); }
void Report::put(const std::string& key, std::size_t value) {
    put(key, static_cast<long long>(value));
}
void Report::put(const std::string& key, bool value) {
    put(key, std::string(value ? "true" : "false"));
}

std::optional<std::string> Report::find(const std::string& section,
                                        const std::string& key) const {
    for (const auto& e : entries_)
        if (e.section == section && e.key == key) return e.value;
    return std::nullopt;
}

std::string Report::to_text() const {
    std::string out = kHeader;
    out += '\n';
    std::string section;
    for (const auto& e : entries_) {
        if (e.section != section) {
            section = e.section;
            out += '[';
            out += section;
            out += "]\n";
        }
        out += e.key;
        out += ": ";
        out += e.value;
        out += '\n';
    }
    return out;
}

Report Report::parse(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line) || line != kHeader)
        throw parse_error("missing report header", 1);
    ++lineno;

    std::optional<Report> rep;
    std::string section;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw parse_error("unterminated section name", lineno);
            section = line.substr(1, line.size() - 2);
            continue;
        }
        const auto colon = line.find(": ");
        if (colon == std::string::npos) throw parse_error("expected 'key: value'", lineno);
        const std::string key = line.substr(0, colon);
        const std::string value = line.substr(colon + 2);
        if (!rep) {
            if (key != "command" || !section.empty())
                throw parse_error("report must start with its command", lineno);
            rep.emplace(value);
            continue;
        }
        rep->current_section_ = section;
        rep->put(key, value);
    }
    if (!rep) throw parse_error("report has no command", lineno + 1);
    rep->current_section_.clear();
    return *rep;
}

Report Report::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open report: " + path);
    return parse(in);
}

void Report::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write report: " + path);
    out << to_text();
}

DiffResult report_diff(const Report& a, const Report& b, double tol) {
    if (a.command() != b.command())
        throw error("cannot diff reports of different commands: " + a.command() +
                    " vs " + b.command());
    const auto& ea = a.entries();
    const auto& eb = b.entries();
    if (ea.size() != eb.size())
        return {false, "entry counts differ: " + format_number(static_cast<long long>(ea.size())) +
                           " vs " + format_number(static_cast<long long>(eb.size()))};
    for (std::size_t i = 0; i < ea.size(); ++i) {
        const auto& x = ea[i];
        const auto& y = eb[i];
        const std::string where = x.section.empty() ? x.key : x.section + "." + x.key;
        if (x.section != y.section || x.key != y.key)
            return {false, "field order differs at " + where};
        if (x.value == y.value) continue;
        const auto na = parse_number(x.value);
        const auto nb = parse_number(y.value);
        if (na && nb) {
            if (*na == *nb) continue;  // covers matching infinities
            if (std::abs(*na - *nb) <= tol) continue;
            return {false, where + ": " + x.value + " vs " + y.value};
        }
        return {false, where + ": '" + x.value + "' vs '" + y.value + "'"};
    }
    return {true, ""};
}

}  // namespace evlab
