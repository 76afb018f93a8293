// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned below.
//
//   seglab_acceptance [--out DIR] [--strict]
//
// Exit status is 0 when every criterion passes or fails only where a known
// deviation is pinned (see README, "Known deviations"); --strict makes every
// FAIL fatal. With --out the combined sweep records and the report are kept.

#include <seglab/energy.hpp>
#include <seglab/errors.hpp>
#include <seglab/gamma.hpp>
#include <seglab/output.hpp>
#include <seglab/presets.hpp>
#include <seglab/recovery.hpp>
#include <seglab/solver.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace seglab;

namespace {

// ---- pinned tolerances -------------------------------------------------------
constexpr double exact_energy_tol = 1e-10;
constexpr double exact_runtime_s = 5.0;
constexpr double penalty_slope_min = 0.45;
constexpr double penalty_r2_min = 0.98;
constexpr double sweep_runtime_s = 600.0;
constexpr double energy_order_tol = 1e-8;
constexpr double eb_target = 0.25, ea_target = 0.75, junction_band = 0.10;
constexpr double total_lo = 0.15, total_hi = 0.35;
constexpr double junction_runtime_s = 60.0;
constexpr double delta_band = 0.15;
constexpr double leak_r2_min = 0.95;
constexpr int pou_points = 10000;
constexpr double pou_sum_tol = 1e-12;
constexpr int gradient_trials = 100;
constexpr double gradient_rel_tol = 1e-6;
constexpr int sech4_instances = 100;
constexpr double sech4_tol = 1e-10;
constexpr double moment_tol = 1e-14;
constexpr double holder_ratio_max = 2.0;

// Criteria whose failure is explained and expected (README, Known deviations).
const std::set<int> known_deviations{4, 5};

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... v) {
    const int len = std::snprintf(nullptr, 0, f, v...);
    std::string out(static_cast<std::size_t>(len) + 1, '\0');
    std::snprintf(out.data(), out.size(), f, v...);
    out.resize(static_cast<std::size_t>(len));
    return out;
}

std::vector<SweepRecord> all_records;

void keep(const std::vector<SweepRecord>& r) { all_records.insert(all_records.end(), r.begin(), r.end()); }

// ---- 1 -----------------------------------------------------------------------
Outcome exact_solution() {
    Outcome o{1, "exact two-phase solution", false, {}};
    const Preset& p = find_preset("two_phase_linear");
    const Grid g = make_grid(p.domain, 128, 128);
    const PhaseTriple phi = boundary_triple(p, g);
    double worst_e = 0.0, worst_u = 0.0, worst_pen = 0.0, seconds = 0.0;
    for (double eps : {1e-1, 1e-2}) {
        const auto t0 = Clock::now();
        const SolveResult r = solve_penalized(phi, eps, SolverConfig{});
        seconds += since(t0);
        worst_e = std::max(worst_e, std::abs(r.breakdown.total_eps - 2.0));
        worst_pen = std::max(worst_pen, r.breakdown.penalty);
        for (int j = 0; j <= g.ny(); ++j)
            for (int i = 0; i <= g.nx(); ++i) {
                const double x = g.node(i, j).x;
                worst_u = std::max({worst_u, std::abs(r.u[0](i, j) - x), std::abs(r.u[1](i, j) - (1.0 - x)),
                                    std::abs(r.u[2](i, j))});
            }
    }
    o.pass = worst_e <= exact_energy_tol && worst_pen == 0.0 && seconds < exact_runtime_s;
    o.detail = fmt("|E-2|=%.2e max|u-(x,1-x,0)|=%.2e penalty=%g runtime=%.2fs; need <=1e-10, 0, <5s", worst_e,
                   worst_u, worst_pen, seconds);
    return o;
}

// ---- 2, 3, 11 ----------------------------------------------------------------
struct PenaltySweep {
    std::vector<SweepRecord> records;
    double seconds = 0.0;
    int cells = 0;
};

PenaltySweep penalty_sweep() {
    SweepConfig cfg;
    cfg.preset = "three_sector";
    cfg.eps = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
    const auto t0 = Clock::now();
    PenaltySweep s;
    s.records = run_sweep("penalty_decay", cfg);
    s.seconds = since(t0);
    s.cells = s.records.empty() ? 0 : s.records.front().grid;
    keep(s.records);
    return s;
}

const std::string penalty_exp = "penalty_decay[three_sector]";

Outcome penalty_decay(const PenaltySweep& s) {
    Outcome o{2, "penalty decay slope", false, {}};
    const auto pen = select(s.records, penalty_exp, "penalty_l2");
    const Rect dom = find_preset("three_sector").domain;
    const double h = std::max(dom.width(), dom.height()) / std::max(1, s.cells);
    bool resolved = s.cells > 0 && s.cells <= 512;
    for (const auto& r : pen) resolved = resolved && h <= std::sqrt(r.eps) / 4.0;
    try {
        const SlopeFit f = fit_slope(pen);
        o.pass = pen.size() == 5 && resolved && f.slope >= penalty_slope_min && f.r2 >= penalty_r2_min &&
                 s.seconds < sweep_runtime_s;
        o.detail = fmt("slope=%.4f r2=%.4f grid=%d^2 runtime=%.0fs; need >=0.45, >=0.98, h<=sqrt(eps)/4, <600s",
                       f.slope, f.r2, s.cells, s.seconds);
    } catch (const Error& e) {
        o.detail = e.what();
    }
    return o;
}

Outcome min_energy(const PenaltySweep& s) {
    Outcome o{3, "minimum-energy structure", false, {}};
    const auto e = select(s.records, penalty_exp, "min_energy");
    const auto f = select(s.records, penalty_exp, "feasible_energy");
    bool mono = e.size() == 5, bounded = !f.empty();
    double worst_rise = -INFINITY, margin = INFINITY;
    for (std::size_t k = 0; k + 1 < e.size(); ++k) {
        // eps decreases along the list, so E must not decrease
        const double rise = e[k].value - e[k + 1].value;
        worst_rise = std::max(worst_rise, rise);
        if (rise > energy_order_tol) mono = false;
    }
    for (const auto& r : e)
        for (const auto& c : f)
            if (c.eps == r.eps) {
                margin = std::min(margin, c.value + energy_order_tol - r.value);
                if (r.value > c.value + energy_order_tol) bounded = false;
            }
    o.pass = mono && bounded;
    o.detail = fmt("largest drop of min E toward smaller eps=%.3g, smallest E(candidate)-min E=%.4g; need <=1e-8, >=0",
                   std::max(0.0, worst_rise), margin);
    return o;
}

Outcome holder(const PenaltySweep& s) {
    Outcome o{11, "Hoelder quotient bounded", false, {}};
    const auto h = select(s.records, penalty_exp, "holder_quotient");
    double lo = INFINITY, hi = 0.0;
    for (const auto& r : h) {
        lo = std::min(lo, r.value);
        hi = std::max(hi, r.value);
    }
    o.pass = h.size() == 5 && lo > 0.0 && hi / lo < holder_ratio_max;
    o.detail = fmt("C^{0,3/4} quotient in [%.4g, %.4g], ratio %.4f; need < 2", lo, hi, lo > 0.0 ? hi / lo : 0.0);
    return o;
}

// ---- 4, 5 --------------------------------------------------------------------
struct JunctionFits {
    std::map<double, SlopeFit> ea, eb, total;
    double seconds_delta1 = 0.0;
    std::string error;
};

JunctionFits junction_fits() {
    JunctionFits j;
    for (double delta : {1.0, 1.5, 2.0}) {
        SweepConfig cfg;
        cfg.preset = "junction_symmetric";
        cfg.deltas = {delta};
        const auto t0 = Clock::now();
        const auto recs = run_sweep("junction_scaling", cfg);
        if (delta == 1.0) j.seconds_delta1 = since(t0);
        keep(recs);
        std::set<std::string> names;
        for (const auto& r : recs) names.insert(r.experiment);
        if (names.size() != 1) {
            j.error = "unexpected experiment names";
            continue;
        }
        const std::string exp = *names.begin();
        try {
            j.ea[delta] = fit_slope(select(recs, exp, "junction_EA"));
            j.eb[delta] = fit_slope(select(recs, exp, "junction_EB"));
            j.total[delta] = fit_slope(select(recs, exp, "junction_total"));
            if (select(recs, exp, "junction_EA").size() != 9) j.error = "expected 9 eps values";
        } catch (const Error& e) {
            j.error = e.what();
        }
    }
    return j;
}

Outcome junction_scaling(const JunctionFits& j) {
    Outcome o{4, "junction ball scaling (delta=1)", false, {}};
    if (!j.error.empty() || !j.ea.count(1.0)) {
        o.detail = j.error;
        return o;
    }
    const double ea = j.ea.at(1.0).slope, eb = j.eb.at(1.0).slope, tot = j.total.at(1.0).slope;
    const bool ok_b = std::abs(eb - eb_target) <= junction_band;
    const bool ok_a = std::abs(ea - ea_target) <= junction_band;
    const bool ok_t = tot >= total_lo && tot <= total_hi;
    o.pass = ok_a && ok_b && ok_t && j.seconds_delta1 < junction_runtime_s;
    o.detail = fmt("E_B slope=%.4f [%s] E_A slope=%.4f [%s] total slope=%.4f [%s] runtime=%.1fs; need 0.25+-0.10, "
                   "0.75+-0.10, [0.15,0.35], <60s",
                   eb, ok_b ? "ok" : "out", ea, ok_a ? "ok" : "out", tot, ok_t ? "ok" : "out", j.seconds_delta1);
    return o;
}

Outcome delta_sweep(const JunctionFits& j) {
    Outcome o{5, "delta-sweep consistency", false, {}};
    if (!j.error.empty() || j.ea.size() != 3) {
        o.detail = j.error;
        return o;
    }
    bool increasing = true, matching = true;
    double prev = -INFINITY;
    std::string text;
    for (const auto& [delta, f] : j.ea) {
        const double want = std::min(0.75, delta - 0.25);
        if (!(f.slope > prev)) increasing = false;
        if (std::abs(f.slope - want) > delta_band) matching = false;
        prev = f.slope;
        text += fmt("delta=%g: %.4f (want %.2f) ", delta, f.slope, want);
    }
    o.pass = increasing && matching;
    o.detail = text + fmt("increasing=%s within 0.15=%s", increasing ? "yes" : "no", matching ? "yes" : "no");
    return o;
}

// ---- 6, 10 -------------------------------------------------------------------
std::vector<SweepRecord> recovery_records() {
    SweepConfig cfg;
    cfg.eps = {1e-1, 1e-2, 1e-3};
    cfg.families = {ProfileFamily::CompactRamp, ProfileFamily::SmoothTanh};
    auto recs = run_sweep("recovery", cfg);
    keep(recs);
    return recs;
}

Outcome constraint_exactness(const std::vector<SweepRecord>& rec) {
    Outcome o{6, "constraint exactness of recovery", false, {}};
    double worst = 0.0;
    std::size_t n = 0;
    for (const std::string& name : preset_names())
        for (const auto& r : select(rec, "recovery[" + name + ",ramp]", "constraint_violation")) {
            worst = std::max(worst, r.value);
            ++n;
        }
    const bool ramp_ok = n == 3 * preset_names().size() && worst == 0.0;

    SweepConfig cfg;
    cfg.families = {ProfileFamily::CompactRamp, ProfileFamily::SmoothTanh};
    const auto leak = run_sweep("junction_leak", cfg);
    keep(leak);
    std::vector<double> x, y;
    bool positive = true;
    for (const auto& r : select(leak, "junction_leak[tanh]", "constraint_violation")) {
        if (!(r.value > 0.0)) positive = false;
        x.push_back(1.0 / std::sqrt(r.eps));
        y.push_back(std::log(std::max(r.value, 1e-300)));
    }
    double ramp_leak = 0.0;
    for (const auto& r : select(leak, "junction_leak[ramp]", "constraint_violation")) ramp_leak = std::max(ramp_leak, r.value);
    try {
        const SlopeFit f = fit_line(x, y);
        const double c = -f.slope;
        o.pass = ramp_ok && ramp_leak == 0.0 && positive && c > 0.0 && f.r2 >= leak_r2_min;
        o.detail = fmt("ramp max|u1u2u3|=%g over %zu runs, ramp leak=%g; tanh leak ~ exp(-c/sqrt(eps)) c=%.4f r2=%.4f; "
                       "need 0, 0, c>0, r2>=0.95",
                       worst, n, ramp_leak, c, f.r2);
    } catch (const Error& e) {
        o.detail = e.what();
    }
    return o;
}

Outcome l2_recovery(const std::vector<SweepRecord>& rec) {
    Outcome o{10, "L2 recovery convergence", false, {}};
    o.pass = true;
    for (const char* name : {"circle_interface", "three_sector"})
        for (const char* fam : {"ramp", "tanh"}) {
            const auto l2 = select(rec, fmt("recovery[%s,%s]", name, fam), "l2_recovery_error");
            bool dec = l2.size() == 3;
            std::string seq;
            for (std::size_t k = 0; k < l2.size(); ++k) {
                if (k > 0 && !(l2[k].value < l2[k - 1].value)) dec = false;
                seq += fmt(k ? " > %.4g" : "%.4g", l2[k].value);
            }
            o.pass = o.pass && dec;
            o.detail += fmt("%s/%s: %s%s; ", name, fam, seq.c_str(), dec ? "" : " (not decreasing)");
        }
    o.detail += "need strictly decreasing";
    return o;
}

// ---- 7 -----------------------------------------------------------------------
double halton(int i, int base) {
    double f = 1.0, r = 0.0;
    for (; i > 0; i /= base) {
        f /= base;
        r += f * (i % base);
    }
    return r;
}

Outcome partition_suite() {
    Outcome o{7, "partition of unity", false, {}};
    std::size_t evaluated = 0, bad_sum = 0, too_many = 0, outside = 0;
    double worst_sum = 0.0;
    for (const std::string& name : preset_names()) {
        const Preset& p = find_preset(name);
        for (double eps : {1e-1, 1e-2, 1e-3}) {
            const RecoveryConfig cfg = recovery_config(p, eps, 1.0, ProfileFamily::CompactRamp);
            const double w = std::sqrt(eps);
            for (int n = 1; n <= pou_points; ++n) {
                const Vec2 x{p.domain.x0 + halton(n, 2) * p.domain.width(), p.domain.y0 + halton(n, 3) * p.domain.height()};
                const RegionKind region = fixture_region(p, x);
                const CutoffWeights cw = partition_weights(x, cfg, p.domain, region);
                ++evaluated;
                const double dev = std::abs(cw.sum() - 1.0);
                worst_sum = std::max(worst_sum, dev);
                if (dev > pou_sum_tol) ++bad_sum;
                if (cw.positive_count() > 2) ++too_many;
                // each weight lives in the sqrt(eps)-neighbourhood of its set
                bool ok = true;
                if (cw.boundary > 0.0 && !(cw.d_bd < w)) ok = false;
                if (cw.junction > 0.0 && !(cw.d_junc < w)) ok = false;
                for (std::size_t k = 0; k < cw.interface.size(); ++k)
                    if (cw.interface[k] > 0.0 && !(cw.d_interface[k] < w)) ok = false;
                for (std::size_t k = 0; k < cw.bulk.size(); ++k)
                    if (cw.bulk[k] > 0.0 && k != static_cast<std::size_t>(region)) ok = false;
                if (!ok) ++outside;
            }
        }
    }
    o.pass = bad_sum == 0 && too_many == 0 && outside == 0;
    o.detail = fmt("%zu points (6 presets x 3 eps x 1e4): sum violations=%zu (max dev %.1e), >2 positive=%zu, "
                   "support violations=%zu; need all 0",
                   evaluated, bad_sum, worst_sum, too_many, outside);
    return o;
}

// ---- 8 -----------------------------------------------------------------------
Outcome gradient_check() {
    Outcome o{8, "gradient check", false, {}};
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> val(0.0, 1.0), logeps(-3.0, 0.0);
    const Grid g = make_grid({0.0, 0.0, 1.0, 1.0}, 7, 7); // 8 x 8 nodes
    double worst = 0.0;
    for (int trial = 0; trial < gradient_trials; ++trial) {
        const double eps = std::pow(10.0, logeps(rng));
        PhaseTriple t{ScalarField(g), ScalarField(g), ScalarField(g)};
        for (int c = 0; c < 3; ++c)
            for (double& v : t[c].values()) v = val(rng);
        const PhaseTriple grad = energy_gradient(t, eps);
        double err = 0.0, scale = 0.0;
        for (int c = 0; c < 3; ++c)
            for (int j = 1; j < g.ny(); ++j)
                for (int i = 1; i < g.nx(); ++i) {
                    const double h = 1e-5 * std::max(1.0, t[c](i, j));
                    PhaseTriple a = t, b = t;
                    a[c](i, j) += h;
                    b[c](i, j) -= h;
                    const double fd = (energy_eps(a, eps).total_eps - energy_eps(b, eps).total_eps) / (2.0 * h);
                    err = std::max(err, std::abs(fd - grad[c](i, j)));
                    scale = std::max(scale, std::abs(grad[c](i, j)));
                }
        worst = std::max(worst, err / scale);
    }
    o.pass = worst <= gradient_rel_tol;
    o.detail = fmt("%d trials on 8x8 nodes, max relative error %.2e; need <= 1e-6", gradient_trials, worst);
    return o;
}

// ---- 9 -----------------------------------------------------------------------
Outcome integral_oracles() {
    Outcome o{9, "analytic integral oracles", false, {}};
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> logeps(-5.0, 0.0), u(-1.0, 1.0);
    double worst = 0.0, worst_moment = 0.0;
    for (int k = 0; k < sech4_instances; ++k) {
        const double eps = std::pow(10.0, logeps(rng));
        const double w = std::sqrt(eps);
        double a = 6.0 * w * u(rng), b = 6.0 * w * u(rng);
        if (a > b) std::swap(a, b);
        auto f = [w](double s) {
            const double c = 1.0 / std::cosh(s / w);
            return c * c * c * c;
        };
        const double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-15);
        worst = std::max(worst, std::abs(sech4_layer_integral(a, b, eps) - ref));
        // symmetric windows and the whole line carry no first moment
        worst_moment = std::max({worst_moment, std::abs(sech4_first_moment(-std::abs(b), std::abs(b), eps)),
                                 std::abs(sech4_first_moment(-INFINITY, INFINITY, eps))});
    }
    o.pass = worst <= sech4_tol && worst_moment <= moment_tol;
    o.detail = fmt("%d instances vs adaptive Gauss-Kronrod: max error %.2e; first moment %.1e; need <=1e-10, <=1e-14",
                   sech4_instances, worst, worst_moment);
    return o;
}

} // namespace

int main(int argc, char** argv) {
    std::string out;
    bool strict = false;
    for (int k = 1; k < argc; ++k) {
        if (!std::strcmp(argv[k], "--strict")) strict = true;
        else if (!std::strcmp(argv[k], "--out") && k + 1 < argc) out = argv[++k];
        else {
            std::fprintf(stderr, "usage: %s [--out DIR] [--strict]\n", argv[0]);
            return 1;
        }
    }

    std::vector<Outcome> results;
    auto attempt = [&](int id, const char* title, const std::function<Outcome()>& f) {
        try {
            results.push_back(f());
        } catch (const std::exception& e) {
            results.push_back({id, title, false, std::string("error: ") + e.what()});
        }
    };

    const auto t0 = Clock::now();
    attempt(1, "exact two-phase solution", exact_solution);
    PenaltySweep ps;
    try {
        ps = penalty_sweep();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "penalty sweep failed: %s\n", e.what());
    }
    attempt(2, "penalty decay slope", [&] { return penalty_decay(ps); });
    attempt(3, "minimum-energy structure", [&] { return min_energy(ps); });
    JunctionFits jf;
    try {
        jf = junction_fits();
    } catch (const std::exception& e) {
        jf.error = e.what();
    }
    attempt(4, "junction ball scaling (delta=1)", [&] { return junction_scaling(jf); });
    attempt(5, "delta-sweep consistency", [&] { return delta_sweep(jf); });
    std::vector<SweepRecord> rec;
    try {
        rec = recovery_records();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "recovery sweep failed: %s\n", e.what());
    }
    attempt(6, "constraint exactness of recovery", [&] { return constraint_exactness(rec); });
    attempt(7, "partition of unity", partition_suite);
    attempt(8, "gradient check", gradient_check);
    attempt(9, "analytic integral oracles", integral_oracles);
    attempt(10, "L2 recovery convergence", [&] { return l2_recovery(rec); });
    attempt(11, "Hoelder quotient bounded", [&] { return holder(ps); });

    std::sort(results.begin(), results.end(), [](const Outcome& a, const Outcome& b) { return a.id < b.id; });
    std::ostringstream text;
    int passed = 0, unexpected = 0;
    for (const Outcome& r : results) {
        const bool known = !r.pass && known_deviations.count(r.id);
        if (r.pass) ++passed;
        else if (!known) ++unexpected;
        text << fmt("criterion %2d  %-4s  %-34s %s%s\n", r.id, r.pass ? "PASS" : "FAIL", r.title.c_str(),
                    r.detail.c_str(), known ? "  [known deviation]" : "");
    }
    for (int id : known_deviations)
        for (const Outcome& r : results)
            if (r.id == id && r.pass) text << fmt("note: criterion %d now passes; drop it from known_deviations\n", id);
    text << fmt("summary: %d/%zu PASS, %d unexpected FAIL, %.0fs\n", passed, results.size(), unexpected, since(t0));
    std::fputs(text.str().c_str(), stdout);

    if (!out.empty()) {
        ensure_directory(out);
        std::ostringstream os;
        write_records(os, all_records);
        write_text_file(out + "/records.csv", os.str());
        write_text_file(out + "/acceptance.txt", text.str());
    }
    if (strict) return passed == static_cast<int>(results.size()) ? 0 : 1;
    return unexpected == 0 ? 0 : 1;
}
