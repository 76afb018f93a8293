// seglab: solve, recover, sweep and report on the penalized three-phase energy.
#include "seglab/config.hpp"
#include "seglab/errors.hpp"
#include "seglab/gamma.hpp"
#include "seglab/output.hpp"
#include "seglab/presets.hpp"
#include "seglab/recovery.hpp"
#include "seglab/solver.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

using namespace seglab;

namespace {

struct Options {
    std::string config;
    std::string records;
    std::string out;
    std::string eps;
    std::string family;
    double delta = 0.0;
};

std::string tag(double eps) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "eps%g", eps);
    return buf;
}

std::vector<double> parse_eps_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            fail(ErrorCode::Config, "--eps: not a number: '" + item + "'");
        }
        if (!(out.back() > 0.0)) fail(ErrorCode::Config, "--eps: values must be positive");
    }
    if (out.empty()) fail(ErrorCode::Config, "--eps: empty list");
    return out;
}

RunConfig load(const Options& o) {
    RunConfig rc = load_run_config(o.config);
    if (!o.out.empty()) rc.out_dir = o.out;
    if (!o.eps.empty()) {
        rc.eps = parse_eps_list(o.eps);
        rc.sweep.eps = rc.eps;
    }
    if (!o.family.empty()) {
        try {
            rc.family = parse_profile_family(o.family);
        } catch (const Error& e) {
            fail(ErrorCode::Config, std::string("--family: ") + e.what());
        }
        rc.sweep.families = {rc.family};
    }
    if (o.delta != 0.0) {
        if (o.delta < 1.0) fail(ErrorCode::Config, "--delta must be >= 1");
        rc.delta = o.delta;
        rc.sweep.deltas = {o.delta};
    }
    ensure_directory(rc.out_dir);
    return rc;
}

Grid grid_for(const RunConfig& rc, const Preset& p) {
    return make_grid(p.domain, rc.cells > 0 ? rc.cells : p.cells, rc.cells > 0 ? rc.cells : p.cells);
}

std::vector<JunctionSpec> junctions_inside(const Preset& p, double radius) {
    std::vector<JunctionSpec> out;
    for (const auto& j : p.junctions)
        if (p.domain.boundary_distance(j.center) > radius) out.push_back(j);
    return out;
}

void write_svg(const std::string& path, const std::function<void(std::ostream&)>& f) {
    std::ostringstream os;
    f(os);
    write_text_file(path, os.str());
}

int cmd_solve(const Options& o) {
    const RunConfig rc = load(o);
    const Preset& p = find_preset(rc.preset);
    const Grid g = grid_for(rc, p);
    const PhaseTriple phi = boundary_triple(p, g);
    std::ostringstream breakdown;
    bool header = true;
    for (double eps : rc.eps) {
        const SolveResult r = solve_penalized(phi, eps, rc.solver);
        const std::string stem = "solve_" + tag(eps);
        write_triple_csv(rc.out_dir, stem, r.u);
        const RegionMap rm = classify(r.u, default_zero_tolerance(r.u));
        const EnergyBreakdown b = energy_eps(r.u, eps, &rm, junctions_inside(p, std::sqrt(eps)));
        write_breakdown_csv(breakdown, eps, p.name, b, header);
        header = false;
        std::ostringstream log;
        write_convergence_csv(log, r.log);
        write_text_file(rc.out_dir + "/" + stem + "_convergence.csv", log.str());
        for (int c = 0; c < 3; ++c)
            write_svg(rc.out_dir + "/" + stem + "_u" + std::to_string(c + 1) + ".svg", [&](std::ostream& os) {
                write_field_svg(os, r.u[c], p.name + " u" + std::to_string(c + 1) + " eps=" + tag(eps).substr(3));
            });
        write_svg(rc.out_dir + "/" + stem + "_regions.svg",
                  [&](std::ostream& os) { write_region_svg(os, rm, p.name + " regions " + tag(eps)); });
        write_svg(rc.out_dir + "/" + stem + "_convergence.svg",
                  [&](std::ostream& os) { write_convergence_svg(os, r.log, p.name + " residual " + tag(eps)); });
        std::cout << p.name << " eps=" << eps << " iterations=" << r.iterations << " residual=" << r.residual
                  << (r.converged ? "" : " (not converged)") << " E_eps=" << b.total_eps << " penalty=" << b.penalty
                  << '\n';
    }
    write_text_file(rc.out_dir + "/breakdown.csv", breakdown.str());
    return 0;
}

int cmd_recover(const Options& o) {
    const RunConfig rc = load(o);
    const Preset& p = find_preset(rc.preset);
    const Grid g = grid_for(rc, p);
    const PhaseTriple u = sample_triple(g, p.fixture);
    std::ostringstream viol;
    viol << "eps,constraint_violation\n";
    for (double eps : rc.eps) {
        const RecoveryConfig cfg = recovery_config(p, eps, rc.delta, rc.family);
        const PhaseTriple ue = assemble_recovery(u, cfg);
        const double v = max_constraint_violation(ue);
        const std::string stem = "recovery_" + tag(eps);
        write_triple_csv(rc.out_dir, stem, ue);
        std::ostringstream manifest;
        manifest << "preset: " << p.name << '\n' << "cells: " << g.nx() << '\n';
        write_recovery_manifest(manifest, cfg, v);
        write_text_file(rc.out_dir + "/" + stem + "_manifest.txt", manifest.str());
        char line[64];
        std::snprintf(line, sizeof line, "%.17g,%.17g\n", eps, v);
        viol << line;
        for (int c = 0; c < 3; ++c)
            write_svg(rc.out_dir + "/" + stem + "_u" + std::to_string(c + 1) + ".svg", [&](std::ostream& os) {
                write_field_svg(os, ue[c], p.name + " recovery u" + std::to_string(c + 1) + " " + tag(eps));
            });
        std::cout << p.name << " eps=" << eps << " family=" << to_string(rc.family) << " constraint_violation=" << v
                  << " l2_error=" << l2_distance(ue, u) << '\n';
    }
    write_text_file(rc.out_dir + "/constraint_violation.csv", viol.str());
    return 0;
}

int cmd_sweep(const Options& o) {
    const RunConfig rc = load(o);
    const auto records = run_sweep(rc.experiment, rc.sweep);
    std::ostringstream os;
    write_records(os, records);
    write_text_file(rc.out_dir + "/records.csv", os.str());
    std::cout << "wrote " << records.size() << " records to " << rc.out_dir << "/records.csv\n";
    return 0;
}

int cmd_report(const Options& o) {
    const std::string path = !o.records.empty() ? o.records : o.config;
    if (path.empty()) fail(ErrorCode::Config, "report needs --records <csv>");
    std::ifstream is(path);
    if (!is) fail(ErrorCode::Config, "cannot open records '" + path + "'");
    const auto records = read_records(is);
    const GammaReport rep = gamma_report(records);
    std::ostringstream text;
    write_report(text, rep);
    std::cout << text.str();
    if (!o.out.empty()) {
        ensure_directory(o.out);
        write_text_file(o.out + "/report.txt", text.str());
        std::map<std::pair<std::string, std::string>, bool> seen;
        for (const auto& r : records) {
            if (seen[{r.experiment, r.quantity}]) continue;
            seen[{r.experiment, r.quantity}] = true;
            std::string name = r.experiment + "_" + r.quantity;
            for (char& ch : name)
                if (ch == '[' || ch == ']' || ch == ',' || ch == '=') ch = '_';
            write_svg(o.out + "/" + name + ".svg", [&](std::ostream& os) {
                write_loglog_svg(os, select(records, r.experiment, r.quantity), r.experiment + " " + r.quantity);
            });
        }
    }
    return 0;
}

int exit_code(ErrorCode c) {
    switch (c) {
    case ErrorCode::Config:
    case ErrorCode::Resolution:
    case ErrorCode::InvalidArgument: return 2;
    default: return 3;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical lab for the penalized three-phase segregation energy"};
    app.require_subcommand(1);
    Options o;
    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("--config", o.config, "sectioned key = value run configuration");
        if (needs_config) opt->required();
        sub->add_option("--out", o.out, "output directory (overrides [output] dir)");
        sub->add_option("--eps", o.eps, "comma-separated eps list");
        sub->add_option("--family", o.family, "profile family: tanh or ramp");
        sub->add_option("--delta", o.delta, "radial exponent delta >= 1");
    };
    auto* solve = app.add_subcommand("solve", "minimise E^eps for the configured preset");
    auto* recover = app.add_subcommand("recover", "build recovery sequences of the preset fixture");
    auto* sweep = app.add_subcommand("sweep", "run an eps-sweep experiment and write records.csv");
    auto* report = app.add_subcommand("report", "check the scaling laws on a records file");
    add_common(solve, true);
    add_common(recover, true);
    add_common(sweep, true);
    add_common(report, false);
    report->add_option("--records", o.records, "records CSV written by sweep");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*solve) return cmd_solve(o);
        if (*recover) return cmd_recover(o);
        if (*sweep) return cmd_sweep(o);
        return cmd_report(o);
    } catch (const Error& e) {
        std::cerr << "seglab: " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "seglab: " << e.what() << '\n';
        return 3;
    }
}
