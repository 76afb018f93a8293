#include "seglab/geometry.hpp"

#include "seglab/errors.hpp"
#include "seglab/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <set>

namespace seglab {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
    a = std::fmod(a, two_pi);
    if (a < 0.0) a += two_pi;
    if (a >= two_pi) a = 0.0;
    return a;
}

} // namespace

bool is_bulk(RegionKind k) {
    switch (k) {
    case RegionKind::Pure1:
    case RegionKind::Pure2:
    case RegionKind::Pure3:
    case RegionKind::Two12:
    case RegionKind::Two13:
    case RegionKind::Two23:
    case RegionKind::Zero: return true;
    default: return false;
    }
}

unsigned support_mask(RegionKind k) {
    switch (k) {
    case RegionKind::Pure1: return 0b001;
    case RegionKind::Pure2: return 0b010;
    case RegionKind::Pure3: return 0b100;
    case RegionKind::Two12: return 0b011;
    case RegionKind::Two13: return 0b101;
    case RegionKind::Two23: return 0b110;
    case RegionKind::ConstraintViolation: return 0b111;
    default: return 0;
    }
}

RegionKind region_from_mask(unsigned mask) {
    switch (mask & 0b111u) {
    case 0b000: return RegionKind::Zero;
    case 0b001: return RegionKind::Pure1;
    case 0b010: return RegionKind::Pure2;
    case 0b100: return RegionKind::Pure3;
    case 0b011: return RegionKind::Two12;
    case 0b101: return RegionKind::Two13;
    case 0b110: return RegionKind::Two23;
    default: return RegionKind::ConstraintViolation;
    }
}

std::string to_string(RegionKind kind) {
    switch (kind) {
    case RegionKind::Pure1: return "Pure1";
    case RegionKind::Pure2: return "Pure2";
    case RegionKind::Pure3: return "Pure3";
    case RegionKind::Two12: return "Two12";
    case RegionKind::Two13: return "Two13";
    case RegionKind::Two23: return "Two23";
    case RegionKind::Zero: return "Zero";
    case RegionKind::NearInterface: return "NearInterface";
    case RegionKind::NearJunction: return "NearJunction";
    case RegionKind::BoundaryLayer: return "BoundaryLayer";
    case RegionKind::ConstraintViolation: return "ConstraintViolation";
    }
    return "?";
}

std::string to_string(RegionLabel label) {
    if (label.kind == RegionKind::NearInterface || label.kind == RegionKind::NearJunction)
        return to_string(label.kind) + "(" + std::to_string(label.index) + ")";
    return to_string(label.kind);
}

double default_zero_tolerance(const PhaseTriple& t) {
    double m = 0.0;
    for (int c = 0; c < 3; ++c) m = std::max(m, t[c].max_value());
    return m > 0.0 ? 1e-8 * m : 1e-300;
}

RegionMap classify(const PhaseTriple& t, double tol) {
    require(tol > 0.0, "zero threshold must be positive");
    check_common_grid(t);
    RegionMap rm;
    rm.grid = t.grid();
    rm.labels.resize(rm.grid.size());
    const Grid& g = rm.grid;
    parallel_for(g.nodes_y(), [&](int j) {
        for (int i = 0; i < g.nodes_x(); ++i) {
            unsigned mask = 0;
            for (int c = 0; c < 3; ++c)
                if (t[c](i, j) > tol) mask |= 1u << c;
            rm.labels[g.index(i, j)] = RegionLabel{region_from_mask(mask), -1};
        }
    });
    rm.violations = static_cast<std::size_t>(std::count_if(rm.labels.begin(), rm.labels.end(), [](const RegionLabel& l) {
        return l.kind == RegionKind::ConstraintViolation;
    }));
    return rm;
}

void write_region_csv(std::ostream& os, const RegionMap& rm) {
    const Grid& g = rm.grid;
    os << "x,y,label\n";
    os.precision(17);
    for (int j = 0; j <= g.ny(); ++j)
        for (int i = 0; i <= g.nx(); ++i) {
            const Vec2 p = g.node(i, j);
            os << p.x << ',' << p.y << ',' << to_string(rm.at(i, j)) << '\n';
        }
}

// ---------------------------------------------------------------------------

std::string to_string(InterfaceType t) {
    switch (t) {
    case InterfaceType::I: return "I";
    case InterfaceType::IIa: return "IIa";
    case InterfaceType::IIb: return "IIb";
    case InterfaceType::III: return "III";
    case InterfaceType::Untyped: return "untyped";
    }
    return "?";
}

InterfaceType infer_interface_type(RegionKind minus, RegionKind plus) {
    const unsigned m = support_mask(minus), p = support_mask(plus);
    const auto bits = [](unsigned x) { return std::popcount(x); };
    if (m == 0 || p == 0 || bits(m) > 2 || bits(p) > 2 || m == p) return InterfaceType::Untyped;
    if (bits(m) == 1 && bits(p) == 1) return InterfaceType::I;
    if (bits(m) == 1 && bits(p) == 2 && (p & m)) return InterfaceType::IIa;
    if (bits(m) == 2 && bits(p) == 1 && (m & p)) return InterfaceType::IIb;
    if (bits(m) == 2 && bits(p) == 2 && std::popcount(m & p) == 1) return InterfaceType::III;
    return InterfaceType::Untyped;
}

InterfaceGeometry::InterfaceGeometry(InterfaceShape shape, RegionKind minus, RegionKind plus, int junction)
    : shape_(shape), minus_(minus), plus_(plus), type_(infer_interface_type(minus, plus)), junction_(junction) {
    if (const auto* c = std::get_if<CircleShape>(&shape_))
        require(c->radius > 0.0, "circle interface needs a positive radius");
}

namespace {

Vec2 tangent_of(double angle) { return {std::cos(angle), std::sin(angle)}; }
Vec2 right_normal(Vec2 tau) { return {tau.y, -tau.x}; }

} // namespace

Vec2 InterfaceGeometry::point(double t) const {
    return std::visit(
        [t](const auto& s) -> Vec2 {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, LineShape>) return s.point + t * tangent_of(s.angle);
            else if constexpr (std::is_same_v<S, RayShape>) return s.origin + t * tangent_of(s.angle);
            else return s.center + s.radius * Vec2{std::cos(t), std::sin(t)};
        },
        shape_);
}

Vec2 InterfaceGeometry::normal(double t) const {
    return std::visit(
        [t](const auto& s) -> Vec2 {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, CircleShape>) return {std::cos(t), std::sin(t)};
            else return right_normal(tangent_of(s.angle));
        },
        shape_);
}

double InterfaceGeometry::curvature(double) const { return max_curvature(); }

double InterfaceGeometry::max_curvature() const {
    if (const auto* c = std::get_if<CircleShape>(&shape_)) return 1.0 / c->radius;
    return 0.0;
}

InterfaceCoords InterfaceGeometry::coords(Vec2 x) const {
    return std::visit(
        [x](const auto& s) -> InterfaceCoords {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, LineShape>) {
                const Vec2 tau = tangent_of(s.angle);
                const Vec2 d = x - s.point;
                return {dot(d, right_normal(tau)), dot(d, tau)};
            } else if constexpr (std::is_same_v<S, RayShape>) {
                const Vec2 tau = tangent_of(s.angle);
                const Vec2 d = x - s.origin;
                const double t = dot(d, tau);
                if (t < 0.0) fail(ErrorCode::OutOfTube, "point lies behind the origin of a ray interface");
                return {dot(d, right_normal(tau)), t};
            } else {
                const Vec2 d = x - s.center;
                const double r = norm(d);
                if (r <= 1e-12 * s.radius) fail(ErrorCode::OutOfTube, "closest point on circle is not unique");
                return {r - s.radius, wrap_angle(std::atan2(d.y, d.x))};
            }
        },
        shape_);
}

double InterfaceGeometry::distance(Vec2 x) const {
    return std::visit(
        [x](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, LineShape>) {
                return std::abs(dot(x - s.point, right_normal(tangent_of(s.angle))));
            } else if constexpr (std::is_same_v<S, RayShape>) {
                const Vec2 tau = tangent_of(s.angle);
                const Vec2 d = x - s.origin;
                if (dot(d, tau) < 0.0) return norm(d);
                return std::abs(dot(d, right_normal(tau)));
            } else {
                return std::abs(norm(x - s.center) - s.radius);
            }
        },
        shape_);
}

std::vector<Vec2> InterfaceGeometry::sample(const Rect& clip, int n) const {
    std::vector<Vec2> out;
    const double diag = std::hypot(clip.width(), clip.height());
    if (const auto* c = std::get_if<CircleShape>(&shape_)) {
        (void)c;
        for (int k = 0; k < n; ++k) {
            const Vec2 p = point(two_pi * k / n);
            if (clip.contains(p)) out.push_back(p);
        }
        return out;
    }
    double t0 = 0.0;
    double t1 = 0.0;
    if (const auto* l = std::get_if<LineShape>(&shape_)) {
        const Vec2 mid{0.5 * (clip.x0 + clip.x1), 0.5 * (clip.y0 + clip.y1)};
        const double tm = dot(mid - l->point, tangent_of(l->angle));
        t0 = tm - diag;
        t1 = tm + diag;
    } else {
        const auto& r = std::get<RayShape>(shape_);
        t1 = diag + norm(r.origin - Vec2{clip.x0, clip.y0}) + norm(r.origin - Vec2{clip.x1, clip.y1});
    }
    for (int k = 0; k <= n; ++k) {
        const Vec2 p = point(t0 + (t1 - t0) * k / n);
        if (clip.contains(p)) out.push_back(p);
    }
    return out;
}

InterfaceCoords interface_coords(const InterfaceGeometry& g, Vec2 x) { return g.coords(x); }

double jacobian(const InterfaceGeometry& g, double s, double t) {
    const double j = 1.0 + s * g.curvature(t);
    if (!(j > 0.0)) fail(ErrorCode::DegenerateTube, "interface coordinates degenerate (1 + s kappa <= 0)");
    return j;
}

// ---------------------------------------------------------------------------

double JunctionSpec::sector_width(int k) const {
    switch (k) {
    case 0: return alpha1;
    case 1: return alpha2;
    default: return two_pi - alpha1 - alpha2;
    }
}

double JunctionSpec::sector_start(int k) const {
    switch (k) {
    case 0: return 0.0;
    case 1: return alpha1;
    default: return alpha1 + alpha2;
    }
}

int JunctionSpec::sector_of_component(int c) const {
    for (int k = 0; k < 3; ++k)
        if (sector_component[static_cast<std::size_t>(k)] == c) return k;
    return -1;
}

double JunctionSpec::local_angle(Vec2 x) const {
    const Vec2 d = x - center;
    return wrap_angle(std::atan2(d.y, d.x) - theta0);
}

void JunctionSpec::validate() const {
    require(alpha1 > 0.0 && alpha2 > 0.0 && alpha1 + alpha2 < two_pi, "junction sector angles must be positive");
}

namespace {

bool junction_label(RegionKind k) { return is_bulk(k) && k != RegionKind::Zero; }

int component_for(RegionKind k, unsigned taken) {
    const unsigned m = support_mask(k);
    for (int c = 0; c < 3; ++c)
        if ((m & (1u << c)) && !(taken & (1u << c))) return c;
    for (int c = 0; c < 3; ++c)
        if (m & (1u << c)) return c;
    return 0;
}

} // namespace

std::vector<JunctionSpec> detect_junctions(const RegionMap& rm) {
    const Grid& g = rm.grid;
    std::vector<char> flagged(g.size(), 0);
    for (int j = 1; j < g.ny(); ++j)
        for (int i = 1; i < g.nx(); ++i) {
            std::set<RegionKind> seen;
            for (int dj = -1; dj <= 1; ++dj)
                for (int di = -1; di <= 1; ++di) {
                    const RegionKind k = rm.at(i + di, j + dj).kind;
                    if (junction_label(k)) seen.insert(k);
                }
            if (seen.size() > 3)
                fail(ErrorCode::UnsupportedGeometry, "more than three bulk regions meet near node (" +
                                                         std::to_string(i) + "," + std::to_string(j) + ")");
            if (seen.size() == 3) flagged[g.index(i, j)] = 1;
        }

    // connected clusters of flagged nodes (8-neighbourhood), scanned in index order
    std::vector<int> cluster(g.size(), -1);
    std::vector<std::vector<std::array<int, 2>>> members;
    for (int j = 1; j < g.ny(); ++j)
        for (int i = 1; i < g.nx(); ++i) {
            if (!flagged[g.index(i, j)] || cluster[g.index(i, j)] >= 0) continue;
            const int id = static_cast<int>(members.size());
            members.emplace_back();
            std::vector<std::array<int, 2>> stack{{i, j}};
            cluster[g.index(i, j)] = id;
            while (!stack.empty()) {
                const auto [ci, cj] = stack.back();
                stack.pop_back();
                members[static_cast<std::size_t>(id)].push_back({ci, cj});
                for (int dj = -1; dj <= 1; ++dj)
                    for (int di = -1; di <= 1; ++di) {
                        const int ni = ci + di, nj = cj + dj;
                        if (ni < 1 || nj < 1 || ni >= g.nx() || nj >= g.ny()) continue;
                        const auto idx = g.index(ni, nj);
                        if (flagged[idx] && cluster[idx] < 0) {
                            cluster[idx] = id;
                            stack.push_back({ni, nj});
                        }
                    }
            }
        }

    std::vector<JunctionSpec> out;
    const double h = std::max(g.hx(), g.hy());
    for (const auto& nodes : members) {
        Vec2 c{};
        for (auto [i, j] : nodes) c = c + g.node(i, j);
        c = (1.0 / static_cast<double>(nodes.size())) * c;

        double ring = 6.0 * h;
        ring = std::min(ring, g.extent().boundary_distance(c) - h);
        if (ring < 1.5 * h) ring = 1.5 * h;

        constexpr int samples = 720;
        std::vector<RegionKind> lab;
        std::vector<double> ang;
        for (int k = 0; k < samples; ++k) {
            const double a = two_pi * (k + 0.5) / samples;
            const Vec2 p = c + ring * Vec2{std::cos(a), std::sin(a)};
            const int i = std::clamp(static_cast<int>(std::lround((p.x - g.extent().x0) / g.hx())), 0, g.nx());
            const int j = std::clamp(static_cast<int>(std::lround((p.y - g.extent().y0) / g.hy())), 0, g.ny());
            const RegionKind kk = rm.at(i, j).kind;
            if (!junction_label(kk)) continue;
            lab.push_back(kk);
            ang.push_back(a);
        }
        if (lab.empty()) continue;

        // runs of equal labels around the ring; start at a label change
        std::size_t start = 0;
        for (std::size_t k = 0; k < lab.size(); ++k)
            if (lab[k] != lab[(k + lab.size() - 1) % lab.size()]) {
                start = k;
                break;
            }
        struct Run { RegionKind kind; double begin; };
        std::vector<Run> runs;
        for (std::size_t n = 0; n < lab.size(); ++n) {
            const std::size_t k = (start + n) % lab.size();
            const std::size_t prev = (k + lab.size() - 1) % lab.size();
            if (n == 0 || lab[k] != lab[prev]) {
                double a0 = ang[prev], a1 = ang[k];
                if (a1 < a0) a1 += two_pi;
                runs.push_back({lab[k], wrap_angle(0.5 * (a0 + a1))});
            }
        }
        if (runs.size() > 3)
            fail(ErrorCode::UnsupportedGeometry, "junction ring crosses more than three sectors");
        if (runs.size() < 3) continue;

        std::array<int, 3> comp{};
        unsigned taken = 0;
        for (std::size_t k = 0; k < 3; ++k) {
            if (support_mask(runs[k].kind) && std::popcount(support_mask(runs[k].kind)) == 1) {
                comp[k] = component_for(runs[k].kind, 0);
                taken |= 1u << comp[k];
            }
        }
        for (std::size_t k = 0; k < 3; ++k)
            if (std::popcount(support_mask(runs[k].kind)) != 1) {
                comp[k] = component_for(runs[k].kind, taken);
                taken |= 1u << comp[k];
            }
        // rotate so that sector 0 holds the lowest component index
        std::size_t first = 0;
        for (std::size_t k = 1; k < 3; ++k)
            if (comp[k] < comp[first]) first = k;

        JunctionSpec js;
        js.center = c;
        js.theta0 = runs[first].begin;
        for (int k = 0; k < 3; ++k) js.sector_component[static_cast<std::size_t>(k)] = comp[(first + k) % 3];
        auto width = [&](std::size_t k) {
            const double b0 = runs[k % 3].begin, b1 = runs[(k + 1) % 3].begin;
            return wrap_angle(b1 - b0);
        };
        js.alpha1 = width(first);
        js.alpha2 = width(first + 1);
        out.push_back(js);
    }
    return out;
}

RegionMap annotate_layers(const RegionMap& rm, double eps, const std::vector<InterfaceGeometry>& interfaces,
                          const std::vector<JunctionSpec>& junctions) {
    require(eps > 0.0, "eps must be positive");
    const double w = std::sqrt(eps);
    RegionMap out = rm;
    const Grid& g = rm.grid;
    for (int j = 0; j <= g.ny(); ++j)
        for (int i = 0; i <= g.nx(); ++i) {
            const Vec2 p = g.node(i, j);
            RegionLabel& l = out.labels[g.index(i, j)];
            if (g.extent().boundary_distance(p) < w) {
                l = {RegionKind::BoundaryLayer, -1};
                continue;
            }
            bool done = false;
            for (std::size_t k = 0; k < junctions.size() && !done; ++k)
                if (junctions[k].radius(p) < w) {
                    l = {RegionKind::NearJunction, static_cast<int>(k)};
                    done = true;
                }
            for (std::size_t k = 0; k < interfaces.size() && !done; ++k)
                if (interfaces[k].distance(p) < w) {
                    l = {RegionKind::NearInterface, static_cast<int>(k)};
                    done = true;
                }
        }
    return out;
}

} // namespace seglab
