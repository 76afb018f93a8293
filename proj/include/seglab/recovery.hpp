#pragma once

#include "seglab/field.hpp"
#include "seglab/geometry.hpp"
#include "seglab/profiles.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace seglab {

using Triple = std::array<double, 3>;

struct RecoveryConfig {
    double eps = 1e-2;
    double delta = 1.0;
    ProfileFamily family = ProfileFamily::CompactRamp;
    std::vector<InterfaceGeometry> interfaces;
    std::vector<JunctionSpec> junctions;
    /// Dirichlet data phi_i; only boundary nodes are read. Empty: use the input trace.
    std::optional<PhaseTriple> boundary;
    /// Zero threshold for classifying the input; <= 0 selects the default.
    double zero_tol = 0.0;
};

/// Weights of the hierarchical partition of unity at one point.
struct CutoffWeights {
    double boundary = 0.0;
    double junction = 0.0;
    int junction_index = -1;
    std::vector<double> interface; ///< one per declared interface
    std::array<double, 7> bulk{};  ///< indexed by RegionKind (Pure1 .. Zero)

    double d_bd = 0.0;
    double d_junc = 0.0;
    std::vector<double> d_interface;
    double d_region = 0.0;

    double sum() const;
    int positive_count() const;
};

/// Evaluates the partition weights at x, which lies in bulk region `region`.
CutoffWeights partition_weights(Vec2 x, const RecoveryConfig& cfg, const Rect& domain, RegionKind region);

/// Radius multiple beyond which interface cutoffs may switch on next to junction k.
double junction_clearance(const JunctionSpec& j);

/// Checks the geometric preconditions of the construction for this eps.
void validate_recovery_geometry(const RecoveryConfig& cfg, const Rect& domain);

/// Local model across one typed interface in (s, t) coordinates.
class InterfacePatch {
public:
    InterfacePatch(const InterfaceGeometry& g, const PhaseTriple& input, double eps, ProfileFamily family);

    Triple eval(Vec2 x) const;
    /// The same with interface values supplied directly (used by the unit tests).
    Triple eval_with_values(double s, const Triple& minus_values, const Triple& plus_values,
                            const Triple& on_values) const;

private:
    const InterfaceGeometry* g_;
    const PhaseTriple* input_;
    double eps_;
    ProfileFamily family_;
};

/// Ring data for the junction construction: value and theta-derivative of
/// component c of the input at local polar coordinates (r, theta).
using PolarSource = std::function<Profile1D(int c, double r, double theta)>;

/// Input read from a grid triple by bilinear interpolation.
PolarSource grid_polar_source(const PhaseTriple& t, const JunctionSpec& j);
/// Positive part of the junction asymptotic profile.
PolarSource asymptotic_polar_source();

/// chi_k(theta) * u_hat(r, theta) around one junction.
class JunctionPatch {
public:
    JunctionPatch(JunctionSpec j, double eps, double delta, ProfileFamily family, PolarSource source);

    const JunctionSpec& spec() const { return j_; }
    double eps() const { return eps_; }

    Triple eval_polar(double r, double theta) const;
    Triple eval(Vec2 x) const { return eval_polar(j_.radius(x), j_.local_angle(x)); }

    struct PolarGradient {
        Triple dr{};
        Triple dtheta{}; ///< derivative with respect to theta (not divided by r)
    };
    PolarGradient gradient_polar(double r, double theta) const;

private:
    JunctionSpec j_;
    double eps_, delta_;
    ProfileFamily family_;
    PolarSource source_;
};

/// Boundary-layer model phi(pi(x)) + [u(x) - phi(pi(x))] rho(dist / sqrt(eps)).
Triple boundary_layer_value(Vec2 x, const Triple& u_at_x, const PhaseTriple& phi, double eps);
PhaseTriple build_boundary_layer(const PhaseTriple& t, const PhaseTriple& phi, double eps, double zero_tol = 0.0);

/// Samples a point model on the nodes of a grid.
PhaseTriple sample_patch(const Grid& grid, const std::function<Triple(Vec2)>& f);
PhaseTriple build_interface_patch(const InterfaceGeometry& g, const PhaseTriple& t, double eps, ProfileFamily family);
PhaseTriple build_junction_patch(const JunctionSpec& j, const PhaseTriple& t, const RecoveryConfig& cfg);

/// Blends bulk copies and local models with the partition of unity.
PhaseTriple assemble_recovery(const PhaseTriple& t, const RecoveryConfig& cfg);

/// max over nodes of |u1 u2 u3|.
double max_constraint_violation(const PhaseTriple& t);

std::string geometry_fingerprint(const RecoveryConfig& cfg);
void write_recovery_manifest(std::ostream& os, const RecoveryConfig& cfg, double violation);

} // namespace seglab
