#pragma once

#include "seglab/energy.hpp"
#include "seglab/gamma.hpp"
#include "seglab/geometry.hpp"
#include "seglab/solver.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace seglab {

/// Creates the directory (and parents) or throws Config.
void ensure_directory(const std::string& dir);
/// dir/<stem>_u1.csv .. _u3.csv
void write_triple_csv(const std::string& dir, const std::string& stem, const PhaseTriple& t);
void write_text_file(const std::string& path, const std::string& text);

/// One row per (eps, geometry, quantity).
void write_breakdown_csv(std::ostream& os, double eps, const std::string& geometry, const EnergyBreakdown& b,
                         bool header = true);

/// Nodal heatmap, subsampled to at most max_cells rectangles per side.
void write_field_svg(std::ostream& os, const ScalarField& u, const std::string& title, int max_cells = 160);
void write_region_svg(std::ostream& os, const RegionMap& rm, const std::string& title, int max_cells = 160);
/// Points of one quantity against eps on log-log axes, with the OLS line when it exists.
void write_loglog_svg(std::ostream& os, const std::vector<SweepRecord>& records, const std::string& title);
void write_convergence_svg(std::ostream& os, const std::vector<ConvergenceEntry>& log, const std::string& title);

} // namespace seglab
