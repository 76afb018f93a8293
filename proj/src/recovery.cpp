#include "seglab/recovery.hpp"

#include "seglab/errors.hpp"
#include "seglab/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace seglab {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// 1 for d <= w/2, 0 for d >= w
double ramp_inside(double d, double w) { return ramp_rho(2.0 * (w - d) / w); }
// 0 for d <= c w, 1 for d >= (c + 1/2) w
double ramp_outside(double d, double w, double c) { return ramp_rho(2.0 * (d - c * w) / w); }

std::size_t bulk_slot(RegionKind k) { return static_cast<std::size_t>(k); }

Triple masked(const Triple& u, RegionKind region) {
    const unsigned m = support_mask(region);
    Triple out{};
    for (int c = 0; c < 3; ++c)
        if (m & (1u << c)) out[static_cast<std::size_t>(c)] = u[static_cast<std::size_t>(c)];
    return out;
}

Triple values_at(const PhaseTriple& t, Vec2 p) {
    return {t[0].interpolate(p), t[1].interpolate(p), t[2].interpolate(p)};
}

int nearest_junction(Vec2 x, const std::vector<JunctionSpec>& js, double& dist) {
    dist = inf;
    int best = -1;
    for (std::size_t k = 0; k < js.size(); ++k) {
        const double d = js[k].radius(x);
        if (d < dist) {
            dist = d;
            best = static_cast<int>(k);
        }
    }
    return best;
}

} // namespace

double CutoffWeights::sum() const {
    double s = boundary + junction;
    for (double v : interface) s += v;
    for (double v : bulk) s += v;
    return s;
}

int CutoffWeights::positive_count() const {
    int n = (boundary > 0.0) + (junction > 0.0);
    for (double v : interface) n += v > 0.0;
    for (double v : bulk) n += v > 0.0;
    return n;
}

double junction_clearance(const JunctionSpec& j) {
    double narrowest = std::numbers::pi;
    for (int k = 0; k < 3; ++k) narrowest = std::min(narrowest, j.sector_width(k));
    return std::max(1.0, 1.0 / std::sin(0.5 * narrowest));
}

CutoffWeights partition_weights(Vec2 x, const RecoveryConfig& cfg, const Rect& domain, RegionKind region) {
    require(cfg.eps > 0.0, "eps must be positive");
    require(is_bulk(region), "partition weights need a bulk region label");
    const double w = std::sqrt(cfg.eps);
    CutoffWeights cw;
    cw.d_bd = domain.boundary_distance(x);
    cw.boundary = ramp_inside(cw.d_bd, w);
    const double away_from_boundary = ramp_outside(cw.d_bd, w, 1.0);

    const int jk = nearest_junction(x, cfg.junctions, cw.d_junc);
    const double clearance = jk >= 0 ? junction_clearance(cfg.junctions[static_cast<std::size_t>(jk)]) : 1.0;
    if (jk >= 0) {
        cw.junction = (1.0 - cw.boundary) * ramp_inside(cw.d_junc, w) * away_from_boundary;
        if (cw.junction > 0.0) cw.junction_index = jk;
    }

    cw.interface.assign(cfg.interfaces.size(), 0.0);
    cw.d_interface.assign(cfg.interfaces.size(), inf);
    cw.d_region = inf;
    double special = cw.boundary + cw.junction;
    for (std::size_t k = 0; k < cfg.interfaces.size(); ++k) {
        const InterfaceGeometry& g = cfg.interfaces[k];
        const double d = g.distance(x);
        cw.d_interface[k] = d;
        if (g.minus_region() == region || g.plus_region() == region) cw.d_region = std::min(cw.d_region, d);
        if (g.type() == InterfaceType::Untyped) continue;
        const double v = (1.0 - cw.boundary) * (1.0 - cw.junction) * ramp_inside(d, w) *
                         ramp_outside(cw.d_junc, w, clearance) * away_from_boundary;
        cw.interface[k] = v;
        special += v;
    }
    if (special > 1.0 + 1e-12)
        fail(ErrorCode::InvalidGeometry, "overlapping interface neighbourhoods (separation below 2 sqrt(eps))");
    cw.bulk[bulk_slot(region)] = std::max(0.0, 1.0 - special);
    return cw;
}

void validate_recovery_geometry(const RecoveryConfig& cfg, const Rect& domain) {
    require(cfg.eps > 0.0, "eps must be positive");
    require(cfg.delta >= 1.0, "radial exponent delta must be >= 1");
    const double w = std::sqrt(cfg.eps);
    for (std::size_t k = 0; k < cfg.junctions.size(); ++k) {
        const JunctionSpec& j = cfg.junctions[k];
        check_sector_widths(j, cfg.eps);
        if (!(domain.boundary_distance(j.center) > 2.0 * w))
            fail(ErrorCode::InvalidGeometry, "junction ball B(2 sqrt(eps)) leaves the domain");
        for (std::size_t l = 0; l < k; ++l)
            if (norm(j.center - cfg.junctions[l].center) <= 4.0 * w)
                fail(ErrorCode::InvalidGeometry, "junctions closer than 4 sqrt(eps)");
    }
    const Rect inner{domain.x0 + w, domain.y0 + w, domain.x1 - w, domain.y1 - w};
    for (std::size_t a = 0; a < cfg.interfaces.size(); ++a) {
        const InterfaceGeometry& ga = cfg.interfaces[a];
        if (ga.max_curvature() * w >= 1.0)
            fail(ErrorCode::InvalidGeometry, "interface curvature radius below sqrt(eps)");
        if (inner.width() <= 0.0 || inner.height() <= 0.0) continue;
        const auto pts = ga.sample(inner, 2000);
        for (std::size_t b = 0; b < cfg.interfaces.size(); ++b) {
            if (a == b) continue;
            const InterfaceGeometry& gb = cfg.interfaces[b];
            const bool siblings = ga.junction() >= 0 && ga.junction() == gb.junction();
            if (siblings) continue;
            for (const Vec2& p : pts)
                if (gb.distance(p) <= 2.0 * w)
                    fail(ErrorCode::InvalidGeometry, "interfaces " + std::to_string(a) + " and " + std::to_string(b) +
                                                         " are closer than 2 sqrt(eps)");
        }
        for (std::size_t k = 0; k < cfg.junctions.size(); ++k)
            if (ga.junction() != static_cast<int>(k) && ga.distance(cfg.junctions[k].center) <= 2.0 * w)
                fail(ErrorCode::InvalidGeometry, "interface passes within 2 sqrt(eps) of a foreign junction");
    }
}

// ---------------------------------------------------------------------------

InterfacePatch::InterfacePatch(const InterfaceGeometry& g, const PhaseTriple& input, double eps, ProfileFamily family)
    : g_(&g), input_(&input), eps_(eps), family_(family) {
    require(eps > 0.0, "eps must be positive");
    if (g.type() == InterfaceType::Untyped)
        fail(ErrorCode::InvalidGeometry, "untyped interfaces carry no recovery profile");
}

Triple InterfacePatch::eval(Vec2 x) const {
    const InterfaceCoords c = g_->coords(x);
    const double w = std::sqrt(eps_);
    const Vec2 foot = g_->point(c.t);
    const Vec2 n = g_->normal(c.t);
    const Triple minus = values_at(*input_, foot - 2.0 * w * n);
    const Triple plus = values_at(*input_, foot + 2.0 * w * n);
    const Triple on = values_at(*input_, foot);
    return eval_with_values(c.s, minus, plus, on);
}

Triple InterfacePatch::eval_with_values(double s, const Triple& minus_values, const Triple& plus_values,
                                        const Triple& on_values) const {
    const double z = s / std::sqrt(eps_);
    const unsigned m = support_mask(g_->minus_region());
    const unsigned p = support_mask(g_->plus_region());
    const auto idx = [](unsigned bit) { return static_cast<std::size_t>(std::countr_zero(bit)); };
    const double up = step_up(z, family_).value;
    const double down = family_ == ProfileFamily::SmoothTanh ? h_minus(z) : 1.0 - up;
    const double on_plus = onset(z, family_).value;   // psi+ analogue
    const double on_minus = onset(-z, family_).value; // psi- analogue
    Triple u{};
    switch (g_->type()) {
    case InterfaceType::I: {
        const auto a = idx(p), b = idx(m);
        u[a] = plus_values[a] * up;
        u[b] = minus_values[b] * down;
        break;
    }
    case InterfaceType::IIa: {
        const auto a = idx(m), b = idx(p & ~m);
        u[a] = on_values[a];
        u[b] = plus_values[b] * on_plus;
        break;
    }
    case InterfaceType::IIb: {
        const auto a = idx(p), b = idx(m & ~p);
        u[a] = on_values[a];
        u[b] = minus_values[b] * on_minus;
        break;
    }
    case InterfaceType::III: {
        const auto a = idx(m & p), b = idx(m & ~p), c = idx(p & ~m);
        u[a] = minus_values[a] + (plus_values[a] - minus_values[a]) * up;
        u[b] = minus_values[b] * on_minus;
        u[c] = plus_values[c] * on_plus;
        break;
    }
    case InterfaceType::Untyped: break;
    }
    return u;
}

// ---------------------------------------------------------------------------

PolarSource grid_polar_source(const PhaseTriple& t, const JunctionSpec& j) {
    return [&t, j](int c, double r, double theta) {
        auto at = [&](double th) {
            const double a = j.theta0 + th;
            return t[c].interpolate(j.center + r * Vec2{std::cos(a), std::sin(a)});
        };
        constexpr double step = 1e-6;
        return Profile1D{at(theta), (at(theta + step) - at(theta - step)) / (2.0 * step)};
    };
}

PolarSource asymptotic_polar_source() {
    return [](int c, double r, double theta) {
        return Profile1D{junction_profile_positive(c + 1, r, theta), junction_profile_positive_dtheta(c + 1, r, theta)};
    };
}

JunctionPatch::JunctionPatch(JunctionSpec j, double eps, double delta, ProfileFamily family, PolarSource source)
    : j_(j), eps_(eps), delta_(delta), family_(family), source_(std::move(source)) {
    require(delta >= 1.0, "radial exponent delta must be >= 1");
    check_sector_widths(j_, eps_);
}

Triple JunctionPatch::eval_polar(double r, double theta) const {
    const double ring = 2.0 * std::sqrt(eps_);
    const double radial = radial_regularizer(r, eps_, delta_);
    Triple u{};
    if (radial == 0.0) return u;
    for (int c = 0; c < 3; ++c) {
        const int k = j_.sector_of_component(c);
        if (k < 0) continue;
        const double chi = angular_cutoff(k, theta, eps_, j_, family_);
        if (chi == 0.0) continue;
        const double base = r >= ring ? source_(c, r, theta).value : source_(c, ring, theta).value * radial;
        u[static_cast<std::size_t>(c)] = chi * base;
    }
    return u;
}

JunctionPatch::PolarGradient JunctionPatch::gradient_polar(double r, double theta) const {
    const double ring = 2.0 * std::sqrt(eps_);
    PolarGradient g;
    for (int c = 0; c < 3; ++c) {
        const int k = j_.sector_of_component(c);
        if (k < 0) continue;
        const Profile1D chi = angular_cutoff_profile(k, theta, eps_, j_, family_);
        const auto cc = static_cast<std::size_t>(c);
        if (r >= ring) {
            const Profile1D v = source_(c, r, theta);
            constexpr double step = 1e-7;
            const double dr = (source_(c, r + step, theta).value - source_(c, r - step, theta).value) / (2.0 * step);
            g.dr[cc] = chi.value * dr;
            g.dtheta[cc] = chi.slope * v.value + chi.value * v.slope;
        } else {
            const Profile1D v = source_(c, ring, theta);
            const Profile1D rad = radial_regularizer_profile(r, eps_, delta_);
            g.dr[cc] = chi.value * v.value * rad.slope;
            g.dtheta[cc] = (chi.slope * v.value + chi.value * v.slope) * rad.value;
        }
    }
    return g;
}

// ---------------------------------------------------------------------------

Triple boundary_layer_value(Vec2 x, const Triple& u_at_x, const PhaseTriple& phi, double eps) {
    const Rect& domain = phi.grid().extent();
    const double d = domain.boundary_distance(x);
    const double chi = ramp_rho(d / std::sqrt(eps));
    const Vec2 foot = domain.project_to_boundary(x);
    Triple out{};
    for (int c = 0; c < 3; ++c) {
        const auto cc = static_cast<std::size_t>(c);
        const double trace = phi[c].interpolate(foot);
        out[cc] = trace + (u_at_x[cc] - trace) * chi;
    }
    return out;
}

namespace {

void check_boundary_data(const PhaseTriple& phi, double tol) {
    for (auto [i, j] : boundary_nodes(phi.grid())) {
        int positive = 0;
        for (int c = 0; c < 3; ++c) positive += phi[c](i, j) > tol;
        if (positive == 3)
            fail(ErrorCode::InvalidBoundaryData, "boundary data violate phi1 phi2 phi3 = 0 at node (" +
                                                     std::to_string(i) + "," + std::to_string(j) + ")");
    }
}

} // namespace

PhaseTriple sample_patch(const Grid& grid, const std::function<Triple(Vec2)>& f) {
    PhaseTriple out{ScalarField(grid), ScalarField(grid), ScalarField(grid)};
    for (int j = 0; j <= grid.ny(); ++j)
        for (int i = 0; i <= grid.nx(); ++i) {
            const Triple v = f(grid.node(i, j));
            for (int c = 0; c < 3; ++c) out[c](i, j) = v[static_cast<std::size_t>(c)];
        }
    return out;
}

PhaseTriple build_boundary_layer(const PhaseTriple& t, const PhaseTriple& phi, double eps, double zero_tol) {
    require(eps > 0.0, "eps must be positive");
    check_common_grid(t);
    require(t.grid() == phi.grid(), "boundary data live on a different grid");
    check_boundary_data(phi, zero_tol > 0.0 ? zero_tol : default_zero_tolerance(phi));
    const Grid& g = t.grid();
    PhaseTriple out = t;
    for (int j = 0; j <= g.ny(); ++j)
        for (int i = 0; i <= g.nx(); ++i) {
            const Triple v = boundary_layer_value(g.node(i, j), {t[0](i, j), t[1](i, j), t[2](i, j)}, phi, eps);
            for (int c = 0; c < 3; ++c) out[c](i, j) = v[static_cast<std::size_t>(c)];
        }
    return out;
}

PhaseTriple build_interface_patch(const InterfaceGeometry& g, const PhaseTriple& t, double eps, ProfileFamily family) {
    const InterfacePatch patch(g, t, eps, family);
    return sample_patch(t.grid(), [&](Vec2 x) { return patch.eval(x); });
}

PhaseTriple build_junction_patch(const JunctionSpec& j, const PhaseTriple& t, const RecoveryConfig& cfg) {
    if (!(t.grid().extent().boundary_distance(j.center) > 2.0 * std::sqrt(cfg.eps)))
        fail(ErrorCode::InvalidGeometry, "junction ball B(2 sqrt(eps)) leaves the domain");
    const JunctionPatch patch(j, cfg.eps, cfg.delta, cfg.family, grid_polar_source(t, j));
    return sample_patch(t.grid(), [&](Vec2 x) { return patch.eval(x); });
}

PhaseTriple assemble_recovery(const PhaseTriple& t, const RecoveryConfig& cfg) {
    check_common_grid(t);
    const Grid& g = t.grid();
    const Rect& domain = g.extent();
    validate_recovery_geometry(cfg, domain);

    const double tol = cfg.zero_tol > 0.0 ? cfg.zero_tol : default_zero_tolerance(t);
    const RegionMap rm = classify(t, tol);
    if (rm.violations > 0)
        fail(ErrorCode::InvalidArgument, "input violates u1 u2 u3 = 0 at " + std::to_string(rm.violations) +
                                             " nodes; no recovery sequence exists (penalty blows up instead)");

    const double w = std::sqrt(cfg.eps);
    for (const JunctionSpec& found : detect_junctions(rm)) {
        const double reach = std::max(4.0 * std::max(g.hx(), g.hy()), w);
        const bool declared = std::any_of(cfg.junctions.begin(), cfg.junctions.end(),
                                          [&](const JunctionSpec& j) { return norm(j.center - found.center) <= reach; });
        if (!declared) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "undeclared junction near (%.6g, %.6g)", found.center.x, found.center.y);
            fail(ErrorCode::InvalidGeometry, buf);
        }
    }

    const PhaseTriple& phi = cfg.boundary ? *cfg.boundary : t;
    require(phi.grid() == g, "boundary data live on a different grid");
    check_boundary_data(phi, tol);

    std::vector<InterfacePatch> iface;
    iface.reserve(cfg.interfaces.size());
    for (const auto& gi : cfg.interfaces)
        if (gi.type() != InterfaceType::Untyped) iface.emplace_back(gi, t, cfg.eps, cfg.family);
        else iface.emplace_back(InterfaceGeometry(gi.shape(), RegionKind::Pure1, RegionKind::Pure2), t, cfg.eps,
                                cfg.family); // placeholder, weight is always zero
    std::vector<JunctionPatch> junc;
    for (const auto& j : cfg.junctions) junc.emplace_back(j, cfg.eps, cfg.delta, cfg.family, grid_polar_source(t, j));

    PhaseTriple out = t;
    parallel_for(g.nodes_y(), [&](int j) {
        for (int i = 0; i <= g.nx(); ++i) {
            const Vec2 x = g.node(i, j);
            const Triple u{t[0](i, j), t[1](i, j), t[2](i, j)};
            const RegionKind region = rm.at(i, j).kind;
            const CutoffWeights cw = partition_weights(x, cfg, domain, region);

            Triple acc{};
            auto add = [&acc](double weight, const Triple& v) {
                for (std::size_t c = 0; c < 3; ++c) acc[c] += weight * v[c];
            };
            if (cw.boundary > 0.0) add(cw.boundary, boundary_layer_value(x, u, phi, cfg.eps));
            if (cw.junction > 0.0) add(cw.junction, junc[static_cast<std::size_t>(cw.junction_index)].eval(x));
            for (std::size_t k = 0; k < iface.size(); ++k)
                if (cw.interface[k] > 0.0) add(cw.interface[k], iface[k].eval(x));
            const double wb = cw.bulk[bulk_slot(region)];
            if (wb > 0.0) add(wb, masked(u, region));
            for (int c = 0; c < 3; ++c) out[c](i, j) = acc[static_cast<std::size_t>(c)];
        }
    });
    // exact trace: on the boundary the boundary weight is 1 and the model equals phi
    for (auto [i, j] : boundary_nodes(g))
        for (int c = 0; c < 3; ++c) out[c](i, j) = phi[c](i, j);
    return out;
}

double max_constraint_violation(const PhaseTriple& t) {
    const ScalarField p = product_field(t);
    double m = 0.0;
    for (double v : p.values()) m = std::max(m, std::abs(v));
    return m;
}

std::string geometry_fingerprint(const RecoveryConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    for (const auto& g : cfg.interfaces) {
        std::visit(
            [&os](const auto& s) {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, LineShape>) os << "line " << s.point.x << ' ' << s.point.y << ' ' << s.angle;
                else if constexpr (std::is_same_v<S, RayShape>) os << "ray " << s.origin.x << ' ' << s.origin.y << ' ' << s.angle;
                else os << "circle " << s.center.x << ' ' << s.center.y << ' ' << s.radius;
            },
            g.shape());
        os << ' ' << to_string(g.minus_region()) << ' ' << to_string(g.plus_region()) << ' ' << g.junction() << ';';
    }
    for (const auto& j : cfg.junctions)
        os << "junction " << j.center.x << ' ' << j.center.y << ' ' << j.alpha1 << ' ' << j.alpha2 << ' ' << j.theta0 << ' '
           << j.sector_component[0] << j.sector_component[1] << j.sector_component[2] << ';';
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : os.str()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_recovery_manifest(std::ostream& os, const RecoveryConfig& cfg, double violation) {
    os.precision(17);
    os << "eps: " << cfg.eps << '\n'
       << "delta: " << cfg.delta << '\n'
       << "family: " << to_string(cfg.family) << '\n'
       << "interfaces: " << cfg.interfaces.size() << '\n'
       << "junctions: " << cfg.junctions.size() << '\n'
       << "geometry_hash: " << geometry_fingerprint(cfg) << '\n'
       << "constraint_violation: " << violation << '\n';
}

} // namespace seglab
