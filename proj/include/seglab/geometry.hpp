#pragma once

#include "seglab/field.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace seglab {

// ---------------------------------------------------------------------------
// Region labels
// ---------------------------------------------------------------------------

enum class RegionKind {
    Pure1,
    Pure2,
    Pure3,
    Two12,
    Two13,
    Two23,
    Zero,
    NearInterface,
    NearJunction,
    BoundaryLayer,
    ConstraintViolation,
};

struct RegionLabel {
    RegionKind kind = RegionKind::Zero;
    int index = -1; ///< interface or junction index for the Near* kinds

    bool operator==(const RegionLabel&) const = default;
};

bool is_bulk(RegionKind k);
/// Bit i set iff component i is positive in the bulk region.
unsigned support_mask(RegionKind k);
/// Inverse of support_mask; masks with all three bits map to ConstraintViolation.
RegionKind region_from_mask(unsigned mask);
std::string to_string(RegionLabel label);
std::string to_string(RegionKind kind);

struct RegionMap {
    Grid grid;
    std::vector<RegionLabel> labels;
    std::size_t violations = 0; ///< nodes where all three components exceed tol

    const RegionLabel& at(int i, int j) const { return labels[grid.index(i, j)]; }
};

/// Zero threshold used when none is given: 1e-8 times the largest value.
double default_zero_tolerance(const PhaseTriple& t);

/// Thresholded sign pattern per node; u_i > tol counts as positive.
RegionMap classify(const PhaseTriple& t, double tol);

void write_region_csv(std::ostream& os, const RegionMap& rm);

// ---------------------------------------------------------------------------
// Interfaces
// ---------------------------------------------------------------------------

struct LineShape {
    Vec2 point;
    double angle = 0.0; ///< direction of the tangent
};

struct CircleShape {
    Vec2 center;
    double radius = 1.0;
};

/// Half-line starting at origin; used for the arms of a junction.
struct RayShape {
    Vec2 origin;
    double angle = 0.0;
};

using InterfaceShape = std::variant<LineShape, CircleShape, RayShape>;

enum class InterfaceType { I, IIa, IIb, III, Untyped };

std::string to_string(InterfaceType t);

/// Interface type from the bulk regions on the s < 0 and s > 0 sides.
///   I   : Pure_a (s>0) | Pure_b (s<0)
///   IIa : Pure_a (s<0) | Two_ab (s>0)
///   IIb : Two_ab (s<0) | Pure_a (s>0)
///   III : Two_ab (s<0) | Two_ac (s>0)
InterfaceType infer_interface_type(RegionKind minus, RegionKind plus);

struct InterfaceCoords {
    double s = 0.0; ///< signed distance along the normal
    double t = 0.0; ///< foot-point parameter
};

/// Analytic interface with unit normal n(t) = rotate(tangent, -90 deg) for lines
/// and rays, outward normal for circles. The Jacobian of x = x(t) + s n(t) is
/// 1 + s * curvature(t).
class InterfaceGeometry {
public:
    InterfaceGeometry(InterfaceShape shape, RegionKind minus, RegionKind plus, int junction = -1);

    const InterfaceShape& shape() const { return shape_; }
    InterfaceType type() const { return type_; }
    RegionKind minus_region() const { return minus_; }
    RegionKind plus_region() const { return plus_; }
    /// Index of the junction this interface emanates from, or -1.
    int junction() const { return junction_; }

    Vec2 point(double t) const;
    Vec2 normal(double t) const;
    double curvature(double t) const;
    double max_curvature() const;
    /// Closest-point coordinates; throws OutOfTube where the foot point is not unique.
    InterfaceCoords coords(Vec2 x) const;
    /// Unsigned distance to the interface set.
    double distance(Vec2 x) const;
    /// Points along the interface clipped to a rectangle (for separation checks and plots).
    std::vector<Vec2> sample(const Rect& clip, int n) const;

private:
    InterfaceShape shape_;
    RegionKind minus_, plus_;
    InterfaceType type_;
    int junction_;
};

InterfaceCoords interface_coords(const InterfaceGeometry& g, Vec2 x);
/// 1 + s kappa(t); throws DegenerateTube when the factor is not positive.
double jacobian(const InterfaceGeometry& g, double s, double t);

// ---------------------------------------------------------------------------
// Junctions
// ---------------------------------------------------------------------------

/// Triple junction: three sectors counter-clockwise from theta0 with widths
/// alpha1, alpha2 and 2 pi - alpha1 - alpha2. Sector k holds component
/// sector_component[k].
struct JunctionSpec {
    Vec2 center;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double theta0 = 0.0;
    std::array<int, 3> sector_component{0, 1, 2};

    double sector_width(int k) const;
    double sector_start(int k) const;
    /// Sector index holding component c, or -1.
    int sector_of_component(int c) const;
    /// Polar coordinates relative to center, angle measured from theta0 in [0, 2 pi).
    double local_angle(Vec2 x) const;
    double radius(Vec2 x) const { return norm(x - center); }
    void validate() const;
};

/// Points where three distinct non-zero bulk labels meet in a 3x3 node block.
std::vector<JunctionSpec> detect_junctions(const RegionMap& rm);

/// Replace bulk labels by BoundaryLayer / NearJunction / NearInterface inside the
/// sqrt(eps) neighbourhoods, in that priority.
RegionMap annotate_layers(const RegionMap& rm, double eps, const std::vector<InterfaceGeometry>& interfaces,
                          const std::vector<JunctionSpec>& junctions);

} // namespace seglab
