#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace seglab {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double norm(Vec2 a);

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    bool contains(Vec2 p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
    /// Distance from an interior point to the boundary of the rectangle.
    double boundary_distance(Vec2 p) const;
    /// Closest point on the boundary.
    Vec2 project_to_boundary(Vec2 p) const;
};

/// Uniform node-centred grid with nx x ny cells, (nx+1) x (ny+1) nodes.
/// Node (i, j) sits at origin + (i hx, j hy); storage is row-major in j.
class Grid {
public:
    Grid() = default;

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double hx() const { return hx_; }
    double hy() const { return hy_; }
    const Rect& extent() const { return extent_; }

    int nodes_x() const { return nx_ + 1; }
    int nodes_y() const { return ny_ + 1; }
    std::size_t size() const { return static_cast<std::size_t>(nodes_x()) * nodes_y(); }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nodes_x() + i; }
    Vec2 node(int i, int j) const { return {extent_.x0 + i * hx_, extent_.y0 + j * hy_}; }
    bool on_boundary(int i, int j) const { return i == 0 || j == 0 || i == nx_ || j == ny_; }
    /// Trapezoidal quadrature weight of node (i, j) over the closed rectangle.
    double node_weight(int i, int j) const;

    bool operator==(const Grid& o) const;
    bool operator!=(const Grid& o) const { return !(*this == o); }

    friend Grid make_grid(const Rect& extent, int nx, int ny);

private:
    int nx_ = 0, ny_ = 0;
    double hx_ = 0.0, hy_ = 0.0;
    Rect extent_;
};

Grid make_grid(const Rect& extent, int nx, int ny);

/// Nodal values of one component. Boundary nodes carry the Dirichlet trace.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const Grid& grid, double fill = 0.0);

    template <class F>
    static ScalarField sample(const Grid& grid, F&& f) {
        ScalarField u(grid);
        for (int j = 0; j < grid.nodes_y(); ++j)
            for (int i = 0; i < grid.nodes_x(); ++i) u(i, j) = f(grid.node(i, j));
        return u;
    }

    const Grid& grid() const { return grid_; }
    double& operator()(int i, int j) { return values_[grid_.index(i, j)]; }
    double operator()(int i, int j) const { return values_[grid_.index(i, j)]; }
    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

    /// Trace on the boundary nodes, in the order produced by boundary_nodes().
    std::vector<double> boundary_values() const;
    void set_boundary_values(std::span<const double> trace);

    /// Bilinear interpolation; points outside the rectangle are clamped onto it.
    double interpolate(Vec2 p) const;
    double max_value() const;
    double min_value() const;

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Boundary nodes listed counter-clockwise starting at the lower-left corner.
std::vector<std::array<int, 2>> boundary_nodes(const Grid& grid);

struct PhaseTriple {
    std::array<ScalarField, 3> u;

    PhaseTriple() = default;
    PhaseTriple(ScalarField u1, ScalarField u2, ScalarField u3);

    const Grid& grid() const { return u[0].grid(); }
    ScalarField& operator[](int i) { return u[static_cast<std::size_t>(i)]; }
    const ScalarField& operator[](int i) const { return u[static_cast<std::size_t>(i)]; }
};

/// Throws InvalidArgument unless all three components live on one grid.
void check_common_grid(const PhaseTriple& t);

/// Pairwise (tree) summation in index order; bit-reproducible.
double pairwise_sum(std::span<const double> terms);

/// Sum of |grad u|^2 via forward differences on cell edges. Edges lying on the
/// boundary carry half weight so affine fields integrate exactly.
double dirichlet_energy(const ScalarField& u);
double l2_norm(const ScalarField& u);
ScalarField product_field(const PhaseTriple& t);
double l2_distance(const PhaseTriple& a, const PhaseTriple& b);

/// Empirical sup |u(x)-u(y)| / |x-y|^alpha over node pairs inside the
/// sub-rectangle k, which must lie strictly inside the grid rectangle.
double holder_quotient(const ScalarField& u, double alpha, const Rect& k);

void write_field_csv(std::ostream& os, const ScalarField& u);
void write_field_csv(const std::string& path, const ScalarField& u);

} // namespace seglab
