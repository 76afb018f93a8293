#pragma once

#include "seglab/gamma.hpp"
#include "seglab/profiles.hpp"
#include "seglab/solver.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace seglab {

/// Flat sectioned `key = value` text. '#' and ';' start comments.
class IniFile {
public:
    struct Entry {
        std::string value;
        int line = 0;
    };

    static IniFile parse(std::istream& is, const std::string& source);
    static IniFile load(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    std::optional<std::string> get(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& section, const std::string& key) const;
    std::vector<std::string> get_strings(const std::string& section, const std::string& key) const;

    /// Rejects keys outside the allowed set, naming file and line.
    void restrict_keys(const std::map<std::string, std::vector<std::string>>& allowed) const;

    const std::string& source() const { return source_; }

private:
    [[noreturn]] void bad(const std::string& section, const std::string& key, const std::string& what) const;

    std::string source_;
    std::map<std::string, std::map<std::string, Entry>> sections_;
};

struct RunConfig {
    std::string preset = "two_phase_linear";
    int cells = 0; ///< 0: preset default
    std::vector<double> eps{1e-2};
    SolverConfig solver;
    double delta = 1.0;
    ProfileFamily family = ProfileFamily::CompactRamp;
    std::string experiment = "penalty_decay";
    SweepConfig sweep;
    std::string out_dir = "out";
};

RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const IniFile& ini);

} // namespace seglab
