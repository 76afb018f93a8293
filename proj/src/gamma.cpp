#include "seglab/gamma.hpp"

#include "seglab/energy.hpp"
#include "seglab/errors.hpp"
#include "seglab/presets.hpp"
#include "seglab/recovery.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

namespace seglab {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string with_args(const std::string& base, const std::vector<std::string>& args) {
    std::string s = base + "[";
    for (std::size_t k = 0; k < args.size(); ++k) s += (k ? "," : "") + args[k];
    return s + "]";
}

std::string base_of(const std::string& experiment) { return experiment.substr(0, experiment.find('[')); }

std::vector<std::string> args_of(const std::string& experiment) {
    std::vector<std::string> out;
    const auto open = experiment.find('[');
    if (open == std::string::npos) return out;
    std::stringstream ss(experiment.substr(open + 1, experiment.size() - open - 2));
    for (std::string a; std::getline(ss, a, ',');) out.push_back(a);
    return out;
}

void check_decreasing(const std::vector<double>& eps) {
    require(!eps.empty(), "eps list is empty");
    for (std::size_t k = 0; k < eps.size(); ++k) {
        require(eps[k] > 0.0, "eps must be positive");
        if (k > 0) require(eps[k] < eps[k - 1], "eps list must be strictly decreasing");
    }
}

double seconds_since(Clock::time_point t0, bool timings) {
    return timings ? std::chrono::duration<double>(Clock::now() - t0).count() : 0.0;
}

// Interior quarter of the domain (half the side length, same centre).
Rect interior_quarter(const Rect& d) {
    const double cx = 0.5 * (d.x0 + d.x1), cy = 0.5 * (d.y0 + d.y1);
    return {cx - 0.25 * d.width(), cy - 0.25 * d.height(), cx + 0.25 * d.width(), cy + 0.25 * d.height()};
}

// ---------------------------------------------------------------------------

std::vector<SweepRecord> penalty_decay(const SweepConfig& cfg, const std::vector<double>& eps) {
    const Preset& p = find_preset(cfg.preset);
    const int cells = cfg.cells > 0 ? cfg.cells : resolving_cells(p.domain, eps);
    check_resolution(p.domain, cells, eps);
    const Grid g = make_grid(p.domain, cells, cells);
    const PhaseTriple phi = boundary_triple(p, g);
    PhaseTriple candidate = sample_triple(g, p.candidate);
    for (int c = 0; c < 3; ++c)
        for (auto [i, j] : boundary_nodes(g)) candidate[c](i, j) = phi[c](i, j);
    const auto feasible = energy_constrained(candidate);
    if (!feasible) fail(ErrorCode::InvalidArgument, "feasible candidate of preset " + p.name + " is not in S");

    const std::size_t n = eps.size();
    std::vector<SolveResult> best(n);
    std::vector<double> runtime(n, 0.0);
    auto solve = [&](std::size_t k, const PhaseTriple* start) {
        const auto t0 = Clock::now();
        SolveResult r = solve_penalized(phi, eps[k], cfg.solver, start);
        runtime[k] += seconds_since(t0, cfg.timings);
        if (!r.converged)
            fail(ErrorCode::SolverFailure, "no convergence at eps=" + fmt("%g", eps[k]) + " after " +
                                               std::to_string(r.iterations) + " sweeps (residual " +
                                               fmt("%.3e", r.residual) + ")");
        return r;
    };
    auto keep_lower = [&](std::size_t k, SolveResult r) {
        if (best[k].log.empty() || r.breakdown.total_eps < best[k].breakdown.total_eps) best[k] = std::move(r);
    };
    // stationary points from the harmonic extension and from the feasible candidate,
    // then warm starts in both directions along the sweep; the lowest is kept
    for (std::size_t k = 0; k < n; ++k) {
        keep_lower(k, solve(k, nullptr));
        keep_lower(k, solve(k, &candidate));
    }
    for (std::size_t k = 1; k < n; ++k) keep_lower(k, solve(k, &best[k - 1].u));
    for (std::size_t k = n - 1; k-- > 0;) keep_lower(k, solve(k, &best[k + 1].u));

    const std::string exp = with_args("penalty_decay", {p.name});
    const Rect quarter = interior_quarter(p.domain);
    std::vector<SweepRecord> out;
    for (std::size_t k = 0; k < n; ++k) {
        const SolveResult& r = best[k];
        double holder = 0.0;
        for (int c = 0; c < 3; ++c) holder = std::max(holder, holder_quotient(r.u[c], 0.75, quarter));
        out.push_back({exp, eps[k], cells, "penalty_l2", l2_norm(product_field(r.u)), runtime[k], "solver"});
        out.push_back({exp, eps[k], cells, "min_energy", r.breakdown.total_eps, runtime[k], "solver"});
        out.push_back({exp, eps[k], cells, "feasible_energy", *feasible, 0.0, "solver"});
        out.push_back({exp, eps[k], cells, "holder_quotient", holder, 0.0, "solver"});
    }
    return out;
}

std::vector<SweepRecord> junction_scaling(const SweepConfig& cfg, const std::vector<double>& eps) {
    const Preset& p = find_preset("junction_symmetric");
    const JunctionSpec& j = p.junctions.front();
    const auto kinks = junction_profile_kinks();
    std::vector<SweepRecord> out;
    for (double delta : cfg.deltas) {
        const std::string exp = with_args("junction_scaling", {"delta=" + fmt("%g", delta)});
        for (double e : eps) {
            const auto t0 = Clock::now();
            const JunctionPatch patch(j, e, delta, ProfileFamily::CompactRamp, asymptotic_polar_source());
            const JunctionBallEnergy ball = junction_ball_split(patch, kinks);
            const double dt = seconds_since(t0, cfg.timings);
            out.push_back({exp, e, 0, "junction_EA", ball.ea, dt, "analytic-quadrature"});
            out.push_back({exp, e, 0, "junction_EB", ball.eb, dt, "analytic-quadrature"});
            out.push_back({exp, e, 0, "junction_total", ball.total(), dt, "analytic-quadrature"});
        }
    }
    return out;
}

// Cutoff leakage: the junction construction fed with the strictly positive
// envelope r^{3/4}, so the product isolates chi_1 chi_2 chi_3.
std::vector<SweepRecord> junction_leak(const SweepConfig& cfg, const std::vector<double>& eps) {
    const Preset& p = find_preset("junction_symmetric");
    const JunctionSpec& j = p.junctions.front();
    const PolarSource envelope = [](int, double r, double) { return Profile1D{std::pow(r, 0.75), 0.0}; };
    std::vector<SweepRecord> out;
    for (ProfileFamily f : cfg.families) {
        const std::string exp = with_args("junction_leak", {to_string(f)});
        for (double e : eps) {
            const auto t0 = Clock::now();
            const JunctionPatch patch(j, e, 1.0, f, envelope);
            const double ring = 2.0 * std::sqrt(e);
            double worst = 0.0;
            for (int a = 0; a < 16; ++a)
                for (int b = 0; b < 4096; ++b) {
                    const Triple u = patch.eval_polar(ring * (a + 1) / 16.0, 2.0 * std::numbers::pi * b / 4096.0);
                    worst = std::max(worst, std::abs(u[0] * u[1] * u[2]));
                }
            out.push_back({exp, e, 0, "constraint_violation", worst, seconds_since(t0, cfg.timings),
                           "analytic-quadrature"});
        }
    }
    return out;
}

std::vector<SweepRecord> recovery(const SweepConfig& cfg, const std::vector<double>& eps) {
    const std::vector<std::string> names = cfg.presets.empty() ? preset_names() : cfg.presets;
    std::vector<SweepRecord> out;
    for (const std::string& name : names) {
        const Preset& p = find_preset(name);
        const int cells = cfg.cells > 0 ? cfg.cells : resolving_cells(p.domain, eps);
        check_resolution(p.domain, cells, eps);
        const Grid g = make_grid(p.domain, cells, cells);
        const PhaseTriple u = sample_triple(g, p.fixture);
        const auto limit = energy_constrained(u);
        if (!limit) fail(ErrorCode::InvalidArgument, "fixture of preset " + name + " is not in S");
        for (ProfileFamily f : cfg.families) {
            const std::string exp = with_args("recovery", {name, to_string(f)});
            for (double e : eps) {
                const auto t0 = Clock::now();
                const PhaseTriple ue = assemble_recovery(u, recovery_config(p, e, cfg.deltas.front(), f));
                const double dt = seconds_since(t0, cfg.timings);
                const EnergyBreakdown b = energy_eps(ue, e);
                out.push_back({exp, e, cells, "recovery_excess", b.total_eps - *limit, dt, "recovery"});
                out.push_back({exp, e, cells, "l2_recovery_error", l2_distance(ue, u), dt, "recovery"});
                out.push_back({exp, e, cells, "constraint_violation", max_constraint_violation(ue), dt, "recovery"});
            }
        }
    }
    return out;
}

} // namespace

std::vector<std::string> experiment_names() { return {"penalty_decay", "junction_scaling", "recovery", "junction_leak"}; }

std::vector<double> default_eps(const std::string& experiment) {
    if (experiment == "junction_scaling") {
        std::vector<double> e;
        for (int k = 0; k < 9; ++k) e.push_back(std::pow(10.0, -1.0 - 3.0 * k / 8.0));
        return e;
    }
    if (experiment == "recovery") return {1e-1, 1e-2, 1e-3};
    return {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
}

int resolving_cells(const Rect& domain, const std::vector<double>& eps) {
    const double e = *std::min_element(eps.begin(), eps.end());
    const double side = std::max(domain.width(), domain.height());
    int n = 32;
    while (side / n > 0.25 * std::sqrt(e) && n < (1 << 14)) n *= 2;
    return n;
}

void check_resolution(const Rect& domain, int cells, const std::vector<double>& eps) {
    const double h = std::max(domain.width(), domain.height()) / cells;
    for (double e : eps)
        if (h > 0.25 * std::sqrt(e) * (1.0 + 1e-12))
            fail(ErrorCode::Resolution, "grid h=" + fmt("%g", h) + " does not resolve eps=" + fmt("%g", e) +
                                            " (needs h <= sqrt(eps)/4 = " + fmt("%g", 0.25 * std::sqrt(e)) + ")");
}

std::vector<SweepRecord> run_sweep(const std::string& experiment, const SweepConfig& cfg) {
    const std::vector<double> eps = cfg.eps.empty() ? default_eps(experiment) : cfg.eps;
    check_decreasing(eps);
    if (experiment == "penalty_decay") return penalty_decay(cfg, eps);
    if (experiment == "junction_scaling") return junction_scaling(cfg, eps);
    if (experiment == "recovery") return recovery(cfg, eps);
    if (experiment == "junction_leak") return junction_leak(cfg, eps);
    fail(ErrorCode::InvalidArgument, "unknown experiment '" + experiment + "'");
}

// ---------------------------------------------------------------------------

SlopeFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size(), "fit needs paired samples");
    if (x.size() < 3) fail(ErrorCode::CannotFit, "fit needs at least 3 points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
        syy += (y[k] - my) * (y[k] - my);
    }
    if (sxx == 0.0) fail(ErrorCode::CannotFit, "all abscissae coincide");
    SlopeFit f;
    f.n = static_cast<int>(x.size());
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double r = y[k] - (f.intercept + f.slope * x[k]);
        ss_res += r * r;
    }
    // constant y up to roundoff in the mean
    const bool flat = syy <= 1e-24 * n * (1.0 + my * my);
    f.r2 = flat ? 1.0 : 1.0 - ss_res / syy;
    return f;
}

SlopeFit fit_slope(const std::vector<SweepRecord>& records) {
    std::vector<double> x, y;
    for (const auto& r : records) {
        if (!(r.value > 0.0))
            fail(ErrorCode::CannotFit, r.quantity + " is not positive at eps=" + fmt("%g", r.eps));
        x.push_back(std::log(r.eps));
        y.push_back(std::log(r.value));
    }
    return fit_line(x, y);
}

std::vector<SweepRecord> select(const std::vector<SweepRecord>& records, const std::string& experiment,
                                const std::string& quantity) {
    std::vector<SweepRecord> out;
    for (const auto& r : records)
        if (r.experiment == experiment && r.quantity == quantity) out.push_back(r);
    std::stable_sort(out.begin(), out.end(), [](const SweepRecord& a, const SweepRecord& b) { return a.eps > b.eps; });
    return out;
}

bool GammaReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const ReportCheck& c) { return c.pass; });
}

namespace {

std::string slope_text(const SlopeFit& f) { return "slope=" + fmt("%.4f", f.slope) + " r2=" + fmt("%.4f", f.r2); }

// Runs one fit and turns a CannotFit into a failed check.
template <class Judge>
ReportCheck fit_check(const std::string& name, const std::vector<SweepRecord>& rs, Judge judge) {
    try {
        const SlopeFit f = fit_slope(rs);
        auto [ok, need] = judge(f);
        return {name, ok, slope_text(f) + "; need " + need};
    } catch (const Error& e) {
        return {name, false, e.what()};
    }
}

} // namespace

GammaReport gamma_report(const std::vector<SweepRecord>& records) {
    GammaReport rep;
    std::set<std::string> experiments;
    for (const auto& r : records) experiments.insert(r.experiment);

    // sorted experiment names give a canonical check order
    std::map<double, SlopeFit> ea_by_delta;
    for (const std::string& exp : experiments) {
        const std::string base = base_of(exp);
        const auto args = args_of(exp);
        if (base == "penalty_decay") {
            rep.checks.push_back(fit_check(exp + " penalty_slope", select(records, exp, "penalty_l2"), [](const SlopeFit& f) {
                return std::pair{f.slope >= 0.45 && f.r2 >= 0.98, std::string("slope >= 0.45, r2 >= 0.98")};
            }));

            const auto e = select(records, exp, "min_energy");
            const auto feas = select(records, exp, "feasible_energy");
            bool mono = true, bounded = true;
            std::string where;
            for (std::size_t k = 0; k + 1 < e.size(); ++k)
                if (e[k + 1].value < e[k].value - 1e-8) {
                    mono = false;
                    where += " drop at eps=" + fmt("%g", e[k + 1].eps);
                }
            double margin = std::numeric_limits<double>::infinity();
            for (const auto& r : e)
                for (const auto& f : feas)
                    if (f.eps == r.eps) {
                        margin = std::min(margin, f.value - r.value);
                        if (r.value > f.value + 1e-8) bounded = false;
                    }
            rep.checks.push_back({exp + " min_energy_monotone", mono && !e.empty(),
                                  "nonincreasing in eps within 1e-8 over " + std::to_string(e.size()) + " points" + where});
            rep.checks.push_back({exp + " min_energy_bounded", bounded && !feas.empty(),
                                  "min over eps of E(candidate) - min E^eps = " + fmt("%.6g", margin)});

            const auto h = select(records, exp, "holder_quotient");
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
            for (const auto& r : h) {
                lo = std::min(lo, r.value);
                hi = std::max(hi, r.value);
            }
            rep.checks.push_back({exp + " holder_bounded", !h.empty() && lo > 0.0 && hi < 2.0 * lo,
                                  "max/min=" + fmt("%.4f", lo > 0.0 ? hi / lo : 0.0) + "; need < 2"});
        } else if (base == "junction_scaling") {
            double delta = 1.0;
            if (!args.empty() && args[0].rfind("delta=", 0) == 0) delta = std::stod(args[0].substr(6));
            const auto ea = select(records, exp, "junction_EA");
            try {
                ea_by_delta[delta] = fit_slope(ea);
            } catch (const Error&) {
            }
            if (delta == 1.0) {
                rep.checks.push_back(fit_check(exp + " EB_slope", select(records, exp, "junction_EB"), [](const SlopeFit& f) {
                    return std::pair{std::abs(f.slope - 0.25) <= 0.10, std::string("0.25 +- 0.10")};
                }));
                rep.checks.push_back(fit_check(exp + " EA_slope", ea, [](const SlopeFit& f) {
                    return std::pair{std::abs(f.slope - 0.75) <= 0.10, std::string("0.75 +- 0.10")};
                }));
                rep.checks.push_back(fit_check(exp + " total_slope", select(records, exp, "junction_total"), [](const SlopeFit& f) {
                    return std::pair{f.slope >= 0.15 && f.slope <= 0.35, std::string("in [0.15, 0.35]")};
                }));
            }
        } else if (base == "recovery") {
            const bool ramp = args.size() > 1 && args[1] == "ramp";
            const auto viol = select(records, exp, "constraint_violation");
            if (ramp) {
                double worst = 0.0;
                for (const auto& r : viol) worst = std::max(worst, r.value);
                rep.checks.push_back({exp + " constraint_exact", !viol.empty() && worst == 0.0,
                                      "max |u1 u2 u3| = " + fmt("%.3g", worst) + "; need exactly 0"});
            }
            const auto l2 = select(records, exp, "l2_recovery_error");
            bool all_zero = true, decreasing = true;
            for (std::size_t k = 0; k < l2.size(); ++k) {
                all_zero = all_zero && l2[k].value == 0.0;
                if (k > 0 && !(l2[k].value < l2[k - 1].value)) decreasing = false;
            }
            std::string seq;
            for (const auto& r : l2) seq += (seq.empty() ? "" : " > ") + fmt("%.4g", r.value);
            rep.checks.push_back({exp + " l2_monotone", !l2.empty() && (decreasing || all_zero),
                                  (all_zero ? "exact at every eps" : "errors " + seq)});

            const auto excess = select(records, exp, "recovery_excess");
            std::vector<SweepRecord> mag = excess;
            bool zero_excess = true;
            for (auto& r : mag) {
                r.value = std::abs(r.value);
                zero_excess = zero_excess && r.value < 1e-12;
            }
            if (!zero_excess)
                rep.checks.push_back(fit_check(exp + " excess_slope", mag, [](const SlopeFit& f) {
                    return std::pair{f.slope >= 0.15, std::string(">= 0.15 (flag below)")};
                }));
        } else if (base == "junction_leak") {
            const auto viol = select(records, exp, "constraint_violation");
            if (!args.empty() && args[0] == "tanh") {
                std::vector<double> x, y;
                bool positive = !viol.empty();
                for (const auto& r : viol) {
                    if (!(r.value > 0.0)) positive = false;
                    x.push_back(1.0 / std::sqrt(r.eps));
                    y.push_back(r.value > 0.0 ? std::log(r.value) : 0.0);
                }
                if (!positive) {
                    rep.checks.push_back({exp + " exp_fit", false, "violation vanished; nothing to fit"});
                } else {
                    try {
                        const SlopeFit f = fit_line(x, y);
                        rep.checks.push_back({exp + " exp_fit", -f.slope > 0.0 && f.r2 >= 0.95,
                                              "c=" + fmt("%.4f", -f.slope) + " r2=" + fmt("%.4f", f.r2) +
                                                  "; need c > 0, r2 >= 0.95"});
                    } catch (const Error& e) {
                        rep.checks.push_back({exp + " exp_fit", false, e.what()});
                    }
                }
            } else {
                double worst = 0.0;
                for (const auto& r : viol) worst = std::max(worst, r.value);
                rep.checks.push_back({exp + " constraint_exact", !viol.empty() && worst == 0.0,
                                      "max |u1 u2 u3| = " + fmt("%.3g", worst) + "; need exactly 0"});
            }
        }
    }

    if (ea_by_delta.size() >= 2) {
        bool ok = true;
        std::string detail;
        double prev = -std::numeric_limits<double>::infinity();
        for (const auto& [delta, f] : ea_by_delta) {
            const double expect = std::min(0.75, delta - 0.25);
            if (!(f.slope > prev)) ok = false;
            if (std::abs(f.slope - expect) > 0.15) ok = false;
            prev = f.slope;
            detail += "delta=" + fmt("%g", delta) + ":" + fmt("%.6f", f.slope) + " ";
        }
        rep.checks.push_back({"junction_scaling delta_consistency", ok,
                              detail + "; need strictly increasing, each within 0.15 of min(3/4, delta - 1/4)"});
    }
    return rep;
}

void write_report(std::ostream& os, const GammaReport& r) {
    std::size_t width = 5;
    for (const auto& c : r.checks) width = std::max(width, c.name.size());
    for (const auto& c : r.checks) {
        os << c.name << std::string(width - c.name.size() + 2, ' ') << "status=" << (c.pass ? "PASS" : "FAIL") << "  "
           << c.detail << '\n';
    }
    if (!r.checks.empty()) os << "overall" << std::string(width - 5, ' ') << "status=" << (r.all_pass() ? "PASS" : "FAIL") << '\n';
}

void write_records(std::ostream& os, const std::vector<SweepRecord>& records) {
    os << "experiment,eps,grid,quantity,value,runtime_s,provenance\n";
    char buf[512];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%d,%s,%.17g,%.6g,%s\n", r.experiment.c_str(), r.eps, r.grid,
                      r.quantity.c_str(), r.value, r.runtime_s, r.provenance.c_str());
        os << buf;
    }
}

std::vector<SweepRecord> read_records(std::istream& is) {
    std::vector<SweepRecord> out;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || (lineno == 1 && line.rfind("experiment,", 0) == 0)) continue;
        // experiment names may contain commas inside brackets
        std::vector<std::string> f;
        std::string cur;
        int depth = 0;
        for (char ch : line) {
            if (ch == '[') ++depth;
            if (ch == ']') --depth;
            if (ch == ',' && depth == 0) {
                f.push_back(cur);
                cur.clear();
            } else {
                cur += ch;
            }
        }
        f.push_back(cur);
        if (f.size() != 7) fail(ErrorCode::Config, "records line " + std::to_string(lineno) + ": expected 7 fields");
        try {
            out.push_back({f[0], std::stod(f[1]), std::stoi(f[2]), f[3], std::stod(f[4]), std::stod(f[5]), f[6]});
        } catch (const std::exception&) {
            fail(ErrorCode::Config, "records line " + std::to_string(lineno) + ": malformed number");
        }
    }
    return out;
}

} // namespace seglab
