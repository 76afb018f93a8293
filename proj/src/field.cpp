#include "seglab/field.hpp"

#include "seglab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace seglab {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::OutOfTube: return "out-of-tube";
    case ErrorCode::DegenerateTube: return "degenerate-tube";
    case ErrorCode::InvalidGeometry: return "invalid-geometry";
    case ErrorCode::UnsupportedGeometry: return "unsupported-geometry";
    case ErrorCode::DegenerateSector: return "degenerate-sector";
    case ErrorCode::InvalidBoundaryData: return "invalid-boundary-data";
    case ErrorCode::SolverFailure: return "solver-failure";
    case ErrorCode::Resolution: return "resolution";
    case ErrorCode::CannotFit: return "cannot-fit";
    case ErrorCode::Config: return "config";
    }
    return "unknown";
}

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

double Rect::boundary_distance(Vec2 p) const {
    return std::min({p.x - x0, x1 - p.x, p.y - y0, y1 - p.y});
}

Vec2 Rect::project_to_boundary(Vec2 p) const {
    const double d[4] = {p.x - x0, x1 - p.x, p.y - y0, y1 - p.y};
    const auto k = std::min_element(d, d + 4) - d;
    switch (k) {
    case 0: return {x0, p.y};
    case 1: return {x1, p.y};
    case 2: return {p.x, y0};
    default: return {p.x, y1};
    }
}

Grid make_grid(const Rect& extent, int nx, int ny) {
    require(nx >= 3 && ny >= 3, "grid needs at least 3 cells per direction");
    require(extent.width() > 0.0 && extent.height() > 0.0, "grid extent must be positive");
    Grid g;
    g.nx_ = nx;
    g.ny_ = ny;
    g.extent_ = extent;
    g.hx_ = extent.width() / nx;
    g.hy_ = extent.height() / ny;
    return g;
}

double Grid::node_weight(int i, int j) const {
    const double wx = (i == 0 || i == nx_) ? 0.5 : 1.0;
    const double wy = (j == 0 || j == ny_) ? 0.5 : 1.0;
    return wx * wy * hx_ * hy_;
}

bool Grid::operator==(const Grid& o) const {
    return nx_ == o.nx_ && ny_ == o.ny_ && extent_.x0 == o.extent_.x0 && extent_.x1 == o.extent_.x1 &&
           extent_.y0 == o.extent_.y0 && extent_.y1 == o.extent_.y1;
}

ScalarField::ScalarField(const Grid& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

std::vector<std::array<int, 2>> boundary_nodes(const Grid& g) {
    std::vector<std::array<int, 2>> out;
    out.reserve(2 * static_cast<std::size_t>(g.nx() + g.ny()));
    for (int i = 0; i < g.nx(); ++i) out.push_back({i, 0});
    for (int j = 0; j < g.ny(); ++j) out.push_back({g.nx(), j});
    for (int i = g.nx(); i > 0; --i) out.push_back({i, g.ny()});
    for (int j = g.ny(); j > 0; --j) out.push_back({0, j});
    return out;
}

std::vector<double> ScalarField::boundary_values() const {
    std::vector<double> out;
    for (auto [i, j] : boundary_nodes(grid_)) out.push_back((*this)(i, j));
    return out;
}

void ScalarField::set_boundary_values(std::span<const double> trace) {
    const auto nodes = boundary_nodes(grid_);
    require(trace.size() == nodes.size(), "boundary trace length does not match grid");
    for (std::size_t k = 0; k < nodes.size(); ++k) (*this)(nodes[k][0], nodes[k][1]) = trace[k];
}

double ScalarField::interpolate(Vec2 p) const {
    const auto& e = grid_.extent();
    const double fx = std::clamp((p.x - e.x0) / grid_.hx(), 0.0, static_cast<double>(grid_.nx()));
    const double fy = std::clamp((p.y - e.y0) / grid_.hy(), 0.0, static_cast<double>(grid_.ny()));
    const int i = std::min(static_cast<int>(fx), grid_.nx() - 1);
    const int j = std::min(static_cast<int>(fy), grid_.ny() - 1);
    const double a = fx - i, b = fy - j;
    const auto& u = *this;
    return (1 - a) * (1 - b) * u(i, j) + a * (1 - b) * u(i + 1, j) + (1 - a) * b * u(i, j + 1) +
           a * b * u(i + 1, j + 1);
}

double ScalarField::max_value() const { return *std::max_element(values_.begin(), values_.end()); }
double ScalarField::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

PhaseTriple::PhaseTriple(ScalarField u1, ScalarField u2, ScalarField u3)
    : u{std::move(u1), std::move(u2), std::move(u3)} {
    check_common_grid(*this);
}

void check_common_grid(const PhaseTriple& t) {
    require(t.u[0].grid() == t.u[1].grid() && t.u[0].grid() == t.u[2].grid(),
            "phase components live on different grids");
}

double pairwise_sum(std::span<const double> terms) {
    if (terms.size() <= 8) {
        double s = 0.0;
        for (double v : terms) s += v;
        return s;
    }
    const auto half = terms.size() / 2;
    return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

double dirichlet_energy(const ScalarField& u) {
    const Grid& g = u.grid();
    std::vector<double> terms;
    terms.reserve(2 * g.size());
    const double cx = g.hy() / g.hx();
    const double cy = g.hx() / g.hy();
    for (int j = 0; j <= g.ny(); ++j) {
        const double wy = (j == 0 || j == g.ny()) ? 0.5 : 1.0;
        for (int i = 0; i < g.nx(); ++i) {
            const double d = u(i + 1, j) - u(i, j);
            terms.push_back(wy * cx * d * d);
        }
    }
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i <= g.nx(); ++i) {
            const double wx = (i == 0 || i == g.nx()) ? 0.5 : 1.0;
            const double d = u(i, j + 1) - u(i, j);
            terms.push_back(wx * cy * d * d);
        }
    }
    return pairwise_sum(terms);
}

double l2_norm(const ScalarField& u) {
    const Grid& g = u.grid();
    std::vector<double> terms(g.size());
    for (int j = 0; j <= g.ny(); ++j)
        for (int i = 0; i <= g.nx(); ++i) terms[g.index(i, j)] = g.node_weight(i, j) * u(i, j) * u(i, j);
    return std::sqrt(pairwise_sum(terms));
}

ScalarField product_field(const PhaseTriple& t) {
    check_common_grid(t);
    ScalarField p(t.grid());
    auto out = p.values();
    const auto a = t[0].values(), b = t[1].values(), c = t[2].values();
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] * b[k] * c[k];
    return p;
}

double l2_distance(const PhaseTriple& a, const PhaseTriple& b) {
    check_common_grid(a);
    check_common_grid(b);
    require(a.grid() == b.grid(), "triples live on different grids");
    const Grid& g = a.grid();
    std::vector<double> terms(3 * g.size());
    for (int c = 0; c < 3; ++c)
        for (int j = 0; j <= g.ny(); ++j)
            for (int i = 0; i <= g.nx(); ++i) {
                const double d = a[c](i, j) - b[c](i, j);
                terms[c * g.size() + g.index(i, j)] = g.node_weight(i, j) * d * d;
            }
    return std::sqrt(pairwise_sum(terms));
}

double holder_quotient(const ScalarField& u, double alpha, const Rect& k) {
    require(alpha > 0.0 && alpha < 1.0, "Hoelder exponent must lie in (0, 1)");
    const Grid& g = u.grid();
    const Rect& e = g.extent();
    require(k.x0 > e.x0 && k.x1 < e.x1 && k.y0 > e.y0 && k.y1 < e.y1 && k.x0 < k.x1 && k.y0 < k.y1,
            "compact set must lie strictly inside the domain");

    const double tol = 1e-12 * std::max(g.hx(), g.hy());
    const int i0 = static_cast<int>(std::ceil((k.x0 - e.x0) / g.hx() - tol));
    const int i1 = static_cast<int>(std::floor((k.x1 - e.x0) / g.hx() + tol));
    const int j0 = static_cast<int>(std::ceil((k.y0 - e.y0) / g.hy() - tol));
    const int j1 = static_cast<int>(std::floor((k.y1 - e.y0) / g.hy() + tol));
    if (i1 < i0 || j1 < j0) return 0.0;

    constexpr std::size_t max_nodes = 10000;
    int stride = 1;
    auto count = [&](int s) {
        return static_cast<std::size_t>((i1 - i0) / s + 1) * static_cast<std::size_t>((j1 - j0) / s + 1);
    };
    while (count(stride) > max_nodes) ++stride;

    struct Sample { double x, y, v; };
    std::vector<Sample> pts;
    for (int j = j0; j <= j1; j += stride)
        for (int i = i0; i <= i1; i += stride) {
            const Vec2 p = g.node(i, j);
            pts.push_back({p.x, p.y, u(i, j)});
        }

    const double half_alpha = 0.5 * alpha;
    double best = 0.0;
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b) {
            const double dv = std::abs(pts[a].v - pts[b].v);
            if (dv == 0.0) continue;
            const double dx = pts[a].x - pts[b].x, dy = pts[a].y - pts[b].y;
            const double q = dv / std::pow(dx * dx + dy * dy, half_alpha);
            best = std::max(best, q);
        }
    return best;
}

void write_field_csv(std::ostream& os, const ScalarField& u) {
    const Grid& g = u.grid();
    os << "x,y,value\n" << std::setprecision(17);
    for (int j = 0; j <= g.ny(); ++j)
        for (int i = 0; i <= g.nx(); ++i) {
            const Vec2 p = g.node(i, j);
            os << p.x << ',' << p.y << ',' << u(i, j) << '\n';
        }
}

void write_field_csv(const std::string& path, const ScalarField& u) {
    std::ofstream os(path);
    if (!os) fail(ErrorCode::Config, "cannot open " + path + " for writing");
    write_field_csv(os, u);
}

} // namespace seglab
