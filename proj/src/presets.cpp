#include "seglab/presets.hpp"

#include "seglab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace seglab {

namespace {

constexpr double pi = std::numbers::pi;

RegionKind pure(int c) { return region_from_mask(1u << c); }

double angle_of(Vec2 p) { return std::atan2(p.y, p.x); }

double wrap_positive(double a) {
    a = std::fmod(a, 2.0 * pi);
    return a < 0.0 ? a + 2.0 * pi : a;
}

double sup_norm(Vec2 p) { return std::max(std::abs(p.x), std::abs(p.y)); }

// sine bump on the arc [centre - width/2, centre + width/2]
double arc_bump(double theta, double centre, double width) {
    const double local = wrap_positive(theta - (centre - 0.5 * width));
    return local < width ? std::sin(pi * local / width) : 0.0;
}

Preset make_two_phase_linear() {
    Preset p;
    p.name = "two_phase_linear";
    p.domain = {0.0, 0.0, 1.0, 1.0};
    p.cells = 128;
    p.fixture = [](Vec2 x) { return Triple{x.x, 1.0 - x.x, 0.0}; };
    p.boundary = p.fixture;
    p.candidate = p.fixture;
    return p;
}

Preset make_one_phase_harmonic() {
    Preset p;
    p.name = "one_phase_harmonic";
    p.domain = {0.0, 0.0, 1.0, 1.0};
    p.cells = 128;
    p.fixture = [](Vec2 x) { return Triple{1.0 + x.x * x.x - x.y * x.y, 0.0, 0.0}; };
    p.boundary = p.fixture;
    p.candidate = p.fixture;
    return p;
}

Preset make_circle_interface() {
    Preset p;
    p.name = "circle_interface";
    p.domain = {-1.0, -1.0, 1.0, 1.0};
    p.cells = 256;
    constexpr double R = 0.5;
    p.fixture = [](Vec2 x) {
        const double q = x.x * x.x + x.y * x.y - R * R;
        return q < 0.0 ? Triple{-q, 0.0, 0.0} : Triple{0.0, q, 0.0};
    };
    p.boundary = p.fixture;
    p.candidate = p.fixture;
    p.interfaces.emplace_back(CircleShape{{0.0, 0.0}, R}, RegionKind::Pure1, RegionKind::Pure2);
    return p;
}

Preset make_three_sector() {
    Preset p;
    p.name = "three_sector";
    p.domain = {-1.0, -1.0, 1.0, 1.0};
    p.cells = 256;
    // boundary bumps overlap pairwise by 2 o. Only eps / height^4 matters for the
    // minimiser, and with unit bumps the sweep eps in [1e-3, 1e-1] is still
    // dominated by the Dirichlet term; height 10 puts it in the segregating regime.
    constexpr double height = 10.0;
    constexpr double o = pi / 12.0;
    constexpr double width = 2.0 * pi / 3.0 + 2.0 * o;
    auto bumps = [](Vec2 x) {
        const double th = angle_of(x);
        Triple v{};
        for (int i = 0; i < 3; ++i)
            v[static_cast<std::size_t>(i)] = height * arc_bump(th, pi / 2.0 + 2.0 * pi * i / 3.0, width);
        return v;
    };
    p.boundary = bumps;
    p.candidate = [bumps](Vec2 x) {
        Triple v = bumps(x);
        const double a = sup_norm(x);
        for (double& c : v) c *= a;
        return v;
    };
    JunctionSpec j;
    j.center = {0.0, 0.0};
    j.alpha1 = j.alpha2 = 2.0 * pi / 3.0;
    j.theta0 = pi / 6.0;
    p.junctions = {j};
    p.fixture = sector_field(j, [](Vec2 x) { return height * sup_norm(x); });
    p.interfaces = junction_rays(j, 0);
    return p;
}

Preset make_junction(const std::string& name, Vec2 centre, double a1, double a2, double theta0) {
    Preset p;
    p.name = name;
    p.domain = {-1.0, -1.0, 1.0, 1.0};
    p.cells = 256;
    JunctionSpec j;
    j.center = centre;
    j.alpha1 = a1;
    j.alpha2 = a2;
    j.theta0 = theta0;
    p.junctions = {j};
    p.fixture = sector_field(j, [centre](Vec2 x) { return std::pow(norm(x - centre), 0.75); });
    p.boundary = p.fixture;
    p.candidate = p.fixture;
    p.interfaces = junction_rays(j, 0);
    return p;
}

std::vector<Preset> build_catalog() {
    std::vector<Preset> v;
    v.push_back(make_one_phase_harmonic());
    v.push_back(make_two_phase_linear());
    v.push_back(make_three_sector());
    v.push_back(make_junction("junction_symmetric", {0.0, 0.0}, 2.0 * pi / 3.0, 2.0 * pi / 3.0, 0.0));
    v.push_back(make_junction("junction_asymmetric", {0.1, -0.1}, pi / 2.0, 3.0 * pi / 4.0, pi / 4.0));
    v.push_back(make_circle_interface());
    return v;
}

const std::vector<Preset>& catalog() {
    static const std::vector<Preset> c = build_catalog();
    return c;
}

} // namespace

PointTriple sector_field(const JunctionSpec& j, std::function<double(Vec2)> amplitude) {
    return [j, amplitude = std::move(amplitude)](Vec2 x) {
        Triple v{};
        if (j.radius(x) == 0.0) return v;
        const double th = j.local_angle(x);
        for (int k = 0; k < 3; ++k) {
            const double local = th - j.sector_start(k);
            const double w = j.sector_width(k);
            if (local > 0.0 && local < w)
                v[static_cast<std::size_t>(j.sector_component[static_cast<std::size_t>(k)])] =
                    amplitude(x) * std::sin(pi * local / w);
        }
        return v;
    };
}

std::vector<InterfaceGeometry> junction_rays(const JunctionSpec& j, int junction_index) {
    std::vector<InterfaceGeometry> rays;
    for (int k = 0; k < 3; ++k) {
        // the normal points clockwise, into the sector that ends on this ray
        const int before = (k + 2) % 3;
        rays.emplace_back(RayShape{j.center, j.theta0 + j.sector_start(k)},
                          pure(j.sector_component[static_cast<std::size_t>(k)]),
                          pure(j.sector_component[static_cast<std::size_t>(before)]), junction_index);
    }
    return rays;
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& p : catalog()) n.push_back(p.name);
        return n;
    }();
    return names;
}

const Preset& find_preset(const std::string& name) {
    for (const auto& p : catalog())
        if (p.name == name) return p;
    fail(ErrorCode::Config, "unknown preset '" + name + "'");
}

PhaseTriple sample_triple(const Grid& g, const PointTriple& f) { return sample_patch(g, f); }

PhaseTriple boundary_triple(const Preset& p, const Grid& g) {
    PhaseTriple t{ScalarField(g), ScalarField(g), ScalarField(g)};
    for (auto [i, j] : boundary_nodes(g)) {
        const Triple v = p.boundary(g.node(i, j));
        for (int c = 0; c < 3; ++c) t[c](i, j) = v[static_cast<std::size_t>(c)];
    }
    return t;
}

RegionKind fixture_region(const Preset& p, Vec2 x) {
    const Triple v = p.fixture(x);
    unsigned mask = 0;
    for (int c = 0; c < 3; ++c)
        if (v[static_cast<std::size_t>(c)] > 1e-14) mask |= 1u << c;
    return region_from_mask(mask);
}

RecoveryConfig recovery_config(const Preset& p, double eps, double delta, ProfileFamily family) {
    RecoveryConfig cfg;
    cfg.eps = eps;
    cfg.delta = delta;
    cfg.family = family;
    cfg.interfaces = p.interfaces;
    cfg.junctions = p.junctions;
    return cfg;
}

} // namespace seglab
