#include "seglab/config.hpp"

#include "seglab/errors.hpp"
#include "seglab/presets.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace seglab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

} // namespace

IniFile IniFile::parse(std::istream& is, const std::string& source) {
    IniFile ini;
    ini.source_ = source;
    std::string section;
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const auto hash = raw.find_first_of("#;");
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']' || s.size() < 3)
                fail(ErrorCode::Config, source + ":" + std::to_string(line) + ": malformed section header");
            section = trim(s.substr(1, s.size() - 2));
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            fail(ErrorCode::Config, source + ":" + std::to_string(line) + ": expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        if (key.empty()) fail(ErrorCode::Config, source + ":" + std::to_string(line) + ": empty key");
        if (section.empty())
            fail(ErrorCode::Config, source + ":" + std::to_string(line) + ": key '" + key + "' outside any section");
        auto& sec = ini.sections_[section];
        if (sec.count(key))
            fail(ErrorCode::Config, source + ":" + std::to_string(line) + ": duplicate key '" + section + "." + key + "'");
        sec[key] = {trim(s.substr(eq + 1)), line};
    }
    return ini;
}

IniFile IniFile::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) fail(ErrorCode::Config, "cannot open config '" + path + "'");
    return parse(is, path);
}

bool IniFile::has(const std::string& section, const std::string& key) const { return get(section, key).has_value(); }

std::optional<std::string> IniFile::get(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return std::nullopt;
    const auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    return k->second.value;
}

void IniFile::bad(const std::string& section, const std::string& key, const std::string& what) const {
    const int line = sections_.at(section).at(key).line;
    fail(ErrorCode::Config, source_ + ":" + std::to_string(line) + ": " + section + "." + key + ": " + what);
}

std::string IniFile::get_string(const std::string& section, const std::string& key, const std::string& fallback) const {
    return get(section, key).value_or(fallback);
}

double IniFile::get_double(const std::string& section, const std::string& key, double fallback) const {
    const auto v = get(section, key);
    if (!v) return fallback;
    try {
        std::size_t used = 0;
        const double d = std::stod(*v, &used);
        if (used != v->size()) throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception&) {
        bad(section, key, "not a number: '" + *v + "'");
    }
}

int IniFile::get_int(const std::string& section, const std::string& key, int fallback) const {
    const auto v = get(section, key);
    if (!v) return fallback;
    try {
        std::size_t used = 0;
        const int d = std::stoi(*v, &used);
        if (used != v->size()) throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception&) {
        bad(section, key, "not an integer: '" + *v + "'");
    }
}

bool IniFile::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    const auto v = get(section, key);
    if (!v) return fallback;
    if (*v == "true" || *v == "yes" || *v == "1") return true;
    if (*v == "false" || *v == "no" || *v == "0") return false;
    bad(section, key, "not a boolean: '" + *v + "'");
}

std::vector<double> IniFile::get_doubles(const std::string& section, const std::string& key) const {
    std::vector<double> out;
    const auto v = get(section, key);
    if (!v) return out;
    for (const auto& item : split_list(*v)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            bad(section, key, "not a number: '" + item + "'");
        }
    }
    return out;
}

std::vector<std::string> IniFile::get_strings(const std::string& section, const std::string& key) const {
    const auto v = get(section, key);
    return v ? split_list(*v) : std::vector<std::string>{};
}

void IniFile::restrict_keys(const std::map<std::string, std::vector<std::string>>& allowed) const {
    for (const auto& [section, entries] : sections_) {
        const auto a = allowed.find(section);
        for (const auto& [key, entry] : entries) {
            const bool ok = a != allowed.end() && std::find(a->second.begin(), a->second.end(), key) != a->second.end();
            if (!ok)
                fail(ErrorCode::Config, source_ + ":" + std::to_string(entry.line) + ": unknown key '" + section + "." +
                                            key + "'");
        }
    }
}

RunConfig parse_run_config(const IniFile& ini) {
    ini.restrict_keys({
        {"grid", {"preset", "cells"}},
        {"solve", {"eps", "method", "init", "order", "tol_residual", "max_iter", "omega", "log_every"}},
        {"recovery", {"delta", "family"}},
        {"sweep", {"experiment", "eps", "presets", "deltas", "families", "timings"}},
        {"output", {"dir"}},
    });
    RunConfig rc;
    auto wrap = [&](const std::string& section, const std::string& key, auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            if (e.code() == ErrorCode::Config && std::string(e.what()).find(ini.source()) != std::string::npos) throw;
            fail(ErrorCode::Config, ini.source() + ": " + section + "." + key + ": " + e.what());
        }
    };

    rc.preset = ini.get_string("grid", "preset", rc.preset);
    wrap("grid", "preset", [&] { find_preset(rc.preset); });
    rc.cells = ini.get_int("grid", "cells", 0);
    if (rc.cells != 0 && rc.cells < 3) fail(ErrorCode::Config, ini.source() + ": grid.cells must be >= 3");

    if (ini.has("solve", "eps")) rc.eps = ini.get_doubles("solve", "eps");
    for (double e : rc.eps)
        if (!(e > 0.0)) fail(ErrorCode::Config, ini.source() + ": solve.eps values must be positive");
    wrap("solve", "method", [&] { rc.solver.method = parse_solver_method(ini.get_string("solve", "method", "gauss_seidel")); });
    wrap("solve", "init", [&] { rc.solver.init = parse_init_strategy(ini.get_string("solve", "init", "harmonic")); });
    wrap("solve", "order", [&] { rc.solver.order = parse_sweep_order(ini.get_string("solve", "order", "lexicographic")); });
    rc.solver.tol_residual = ini.get_double("solve", "tol_residual", rc.solver.tol_residual);
    rc.solver.max_iter = ini.get_int("solve", "max_iter", rc.solver.max_iter);
    rc.solver.omega = ini.get_double("solve", "omega", rc.solver.omega);
    rc.solver.log_every = ini.get_int("solve", "log_every", rc.solver.log_every);
    wrap("solve", "tol_residual", [&] { rc.solver.validate(); });

    rc.delta = ini.get_double("recovery", "delta", rc.delta);
    if (rc.delta < 1.0) fail(ErrorCode::Config, ini.source() + ": recovery.delta must be >= 1");
    wrap("recovery", "family", [&] { rc.family = parse_profile_family(ini.get_string("recovery", "family", "ramp")); });

    rc.experiment = ini.get_string("sweep", "experiment", rc.experiment);
    const auto names = experiment_names();
    if (std::find(names.begin(), names.end(), rc.experiment) == names.end())
        fail(ErrorCode::Config, ini.source() + ": sweep.experiment: unknown experiment '" + rc.experiment + "'");
    rc.sweep.eps = ini.get_doubles("sweep", "eps");
    rc.sweep.preset = rc.preset;
    rc.sweep.cells = rc.cells;
    rc.sweep.solver = rc.solver;
    rc.sweep.presets = ini.get_strings("sweep", "presets");
    for (const auto& p : rc.sweep.presets) wrap("sweep", "presets", [&] { find_preset(p); });
    if (ini.has("sweep", "deltas")) rc.sweep.deltas = ini.get_doubles("sweep", "deltas");
    else rc.sweep.deltas = {rc.delta};
    for (double d : rc.sweep.deltas)
        if (d < 1.0) fail(ErrorCode::Config, ini.source() + ": sweep.deltas values must be >= 1");
    if (ini.has("sweep", "families")) {
        rc.sweep.families.clear();
        for (const auto& f : ini.get_strings("sweep", "families"))
            wrap("sweep", "families", [&] { rc.sweep.families.push_back(parse_profile_family(f)); });
    }
    rc.sweep.timings = ini.get_bool("sweep", "timings", false);
    rc.out_dir = ini.get_string("output", "dir", rc.out_dir);
    return rc;
}

RunConfig load_run_config(const std::string& path) { return parse_run_config(IniFile::load(path)); }

} // namespace seglab
