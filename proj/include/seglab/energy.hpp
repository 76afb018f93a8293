#pragma once

#include "seglab/field.hpp"
#include "seglab/geometry.hpp"
#include "seglab/recovery.hpp"

#include <array>
#include <map>
#include <optional>
#include <vector>

namespace seglab {

/// Dirichlet energy inside a junction ball split into bulk sectors (A) and
/// transition bands (B) of angular half-width 2 sqrt(eps) around sector edges.
struct JunctionBallEnergy {
    double ea = 0.0;
    double eb = 0.0;
    double total() const { return ea + eb; }
};

struct EnergyBreakdown {
    std::array<double, 3> dirichlet{};
    double penalty = 0.0;
    double total_eps = 0.0;
    std::optional<double> total_constrained; ///< empty means +infinity (infeasible)
    std::map<RegionKind, double> per_region;
    std::vector<JunctionBallEnergy> junction_ball;

    double dirichlet_total() const { return dirichlet[0] + dirichlet[1] + dirichlet[2]; }
};

/// (1/eps) ||u1 u2 u3||^2.
double penalty(const PhaseTriple& t, double eps);

/// Feasibility threshold on ||u1 u2 u3||: 1e-10 scale^3, scale = max |u|.
double default_feasibility_tolerance(const PhaseTriple& t);

/// Full breakdown. With a region map every edge is charged to the label of its
/// lower-left endpoint. Junction balls are filled on the grid for each spec given.
EnergyBreakdown energy_eps(const PhaseTriple& t, double eps, const RegionMap* regions = nullptr,
                           const std::vector<JunctionSpec>& junctions = {});

/// Sum of Dirichlet energies if t is (numerically) in the constraint set, else empty.
/// tol <= 0 selects default_feasibility_tolerance.
std::optional<double> energy_constrained(const PhaseTriple& t, double tol = 0.0);

/// Gradient of the discrete E^eps with respect to the interior node values;
/// boundary entries are zero because the trace is pinned.
PhaseTriple energy_gradient(const PhaseTriple& t, double eps);

/// Polar quadrature of a junction patch over B(sqrt(eps)). Extra angular
/// breakpoints (local angles) mark kinks of the ring data.
struct PolarQuadrature {
    int radial_nodes = 64;
    int angular_nodes = 256;
};
JunctionBallEnergy junction_ball_split(const JunctionPatch& patch, const std::vector<double>& kinks = {},
                                       PolarQuadrature q = {});

/// Grid version: edge energies whose midpoints fall inside B(sqrt(eps)).
JunctionBallEnergy junction_ball_split(const PhaseTriple& t, const JunctionSpec& j, double eps);

/// Local angles in [0, 2 pi) where the positive parts of the asymptotic profiles vanish.
std::vector<double> junction_profile_kinks();

} // namespace seglab
