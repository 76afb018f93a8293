#pragma once

#include "seglab/field.hpp"
#include "seglab/geometry.hpp"
#include "seglab/profiles.hpp"
#include "seglab/recovery.hpp"

#include <functional>
#include <string>
#include <vector>

namespace seglab {

using PointTriple = std::function<Triple(Vec2)>;

/// A named test geometry: domain, Dirichlet data for the solver, a segregated
/// fixture for the recovery construction, and the analytic interfaces and
/// junctions of that fixture.
struct Preset {
    std::string name;
    Rect domain;
    int cells = 128;
    PointTriple boundary;  ///< only its trace is used by the solver
    PointTriple fixture;   ///< element of S fed to the recovery construction
    PointTriple candidate; ///< feasible competitor with the solver's traces
    std::vector<InterfaceGeometry> interfaces;
    std::vector<JunctionSpec> junctions;
};

const std::vector<std::string>& preset_names();
/// Throws Config for unknown names.
const Preset& find_preset(const std::string& name);

PhaseTriple sample_triple(const Grid& g, const PointTriple& f);
/// Trace of the boundary function on g (interior zeros).
PhaseTriple boundary_triple(const Preset& p, const Grid& g);

/// Bulk label of the analytic fixture at x.
RegionKind fixture_region(const Preset& p, Vec2 x);

RecoveryConfig recovery_config(const Preset& p, double eps, double delta, ProfileFamily family);

/// Fields positive on one sector each: amplitude(x) sin(pi (theta - start) / width) inside
/// sector k of j, zero elsewhere.
PointTriple sector_field(const JunctionSpec& j, std::function<double(Vec2)> amplitude);
/// The three rays bounding the sectors of j, typed from the adjacent pure regions.
std::vector<InterfaceGeometry> junction_rays(const JunctionSpec& j, int junction_index);

} // namespace seglab
