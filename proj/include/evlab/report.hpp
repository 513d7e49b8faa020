#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

// Structured-text reports: a header line, then `key: value` entries grouped
// under bracketed sections, in insertion order. The format is what the CLI
// writes and what report_diff compares; identical runs produce identical
// bytes, so nothing time- or locale-dependent belongs in here.

namespace evlab {

class Report {
public:
    explicit Report(std::string command);

    void begin_section(std::string name);
    void put(const std::string& key, const std::string& value);
    void put(const std::string& key, const char* value);
    void put(const std::string& key, double value);
    void put(const std::string& key, long long value);
    void put(const std::string& key, int value);
    void put(const std::string& key, std::size_t value);
    void put(const std::string& key, bool value);

    const std::string& command() const { return command_; }

    struct Entry {
        std::string section;  // "" before the first section
        std::string key;
        std::string value;
    };
    const std::vector<Entry>& entries() const { return entries_; }

    // First value under (section, key), if any.
    std::optional<std::string> find(const std::string& section, const std::string& key) const;

    std::string to_text() const;
    static Report parse(std::istream& in);
    static Report load(const std::string& path);
    void save(const std::string& path) const;

private:
    std::string command_;
    std::string current_section_;
    std::vector<Entry> entries_;
};

struct DiffResult {
    bool same = false;
    std::string detail;  // first difference, empty when same
};

// Field-wise comparison; numeric values compare within tol, everything else
// byte-wise. Reports of different commands do not compare (throws error).
DiffResult report_diff(const Report& a, const Report& b, double tol);

}  // namespace evlab
