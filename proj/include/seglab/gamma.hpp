#pragma once

#include "seglab/profiles.hpp"
#include "seglab/solver.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace seglab {

struct SweepRecord {
    std::string experiment; ///< base name plus bracketed arguments, e.g. recovery[circle_interface,ramp]
    double eps = 0.0;
    int grid = 0;           ///< cells per side; 0 for quadrature-only records
    std::string quantity;
    double value = 0.0;
    double runtime_s = 0.0;
    std::string provenance; ///< solver | recovery | analytic-quadrature
};

struct SweepConfig {
    std::vector<double> eps;           ///< strictly decreasing; empty selects the experiment default
    std::string preset = "three_sector";
    std::vector<std::string> presets;  ///< recovery experiment; empty selects all presets
    int cells = 0;                     ///< 0 picks the smallest power of two with h <= sqrt(eps)/4
    SolverConfig solver;
    std::vector<double> deltas{1.0};
    std::vector<ProfileFamily> families{ProfileFamily::CompactRamp, ProfileFamily::SmoothTanh};
    bool timings = false;              ///< otherwise runtime_s is written as 0 for byte-stable output
};

/// Experiments: penalty_decay, junction_scaling, recovery, junction_leak.
std::vector<SweepRecord> run_sweep(const std::string& experiment, const SweepConfig& cfg);

std::vector<std::string> experiment_names();
std::vector<double> default_eps(const std::string& experiment);

/// Smallest power-of-two cell count resolving every eps (h <= sqrt(eps)/4) on the longer side.
int resolving_cells(const Rect& domain, const std::vector<double>& eps);
/// Throws Resolution naming the first eps with h > sqrt(eps)/4.
void check_resolution(const Rect& domain, int cells, const std::vector<double>& eps);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    int n = 0;
};

/// OLS of log(value) on log(eps); needs >= 3 records with positive values.
SlopeFit fit_slope(const std::vector<SweepRecord>& records);
/// OLS of y on x; r2 = 1 when y is constant.
SlopeFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct ReportCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct GammaReport {
    std::vector<ReportCheck> checks;
    bool all_pass() const;
};

GammaReport gamma_report(const std::vector<SweepRecord>& records);
void write_report(std::ostream& os, const GammaReport& r);

void write_records(std::ostream& os, const std::vector<SweepRecord>& records);
std::vector<SweepRecord> read_records(std::istream& is);

/// Records for one experiment and quantity, sorted by decreasing eps.
std::vector<SweepRecord> select(const std::vector<SweepRecord>& records, const std::string& experiment,
                                const std::string& quantity);

} // namespace seglab
