#include <doctest.h>

#include <seglab/errors.hpp>
#include <seglab/geometry.hpp>
#include <seglab/presets.hpp>

#include <cmath>
#include <numbers>
#include <set>

using namespace seglab;
using std::numbers::pi;

namespace {

PhaseTriple single_node(double a, double b, double c) {
    Grid g = make_grid({0.0, 0.0, 1.0, 1.0}, 3, 3);
    return {ScalarField(g, a), ScalarField(g, b), ScalarField(g, c)};
}

RegionKind kind_of(double a, double b, double c) { return classify(single_node(a, b, c), 1e-8).at(1, 1).kind; }

// Sector labels around the origin by direct angle arithmetic.
PhaseTriple sector_triple(const Grid& g, double theta0, double a1, double a2) {
    PhaseTriple t{ScalarField(g), ScalarField(g), ScalarField(g)};
    for (int j = 0; j < g.nodes_y(); ++j)
        for (int i = 0; i < g.nodes_x(); ++i) {
            const Vec2 p = g.node(i, j);
            if (norm(p) < 1e-12) continue;
            double a = std::atan2(p.y, p.x) - theta0;
            a -= 2.0 * pi * std::floor(a / (2.0 * pi));
            const int c = a < a1 ? 0 : (a < a1 + a2 ? 1 : 2);
            t[c](i, j) = 1.0;
        }
    return t;
}

int count_ring_runs(const RegionMap& rm, double radius) {
    const Grid& g = rm.grid;
    std::vector<RegionKind> seq;
    for (int k = 0; k < 3600; ++k) {
        const double a = 2.0 * pi * k / 3600.0;
        const int i = static_cast<int>(std::lround((radius * std::cos(a) - g.extent().x0) / g.hx()));
        const int j = static_cast<int>(std::lround((radius * std::sin(a) - g.extent().y0) / g.hy()));
        seq.push_back(rm.at(i, j).kind);
    }
    int changes = 0;
    for (std::size_t k = 0; k < seq.size(); ++k)
        if (seq[k] != seq[(k + 1) % seq.size()]) ++changes;
    return changes;
}

} // namespace

TEST_CASE("classification by sign pattern") {
    CHECK(kind_of(0.5, 0.0, 0.0) == RegionKind::Pure1);
    CHECK(kind_of(0.3, 0.2, 0.0) == RegionKind::Two12);
    CHECK(kind_of(0.0, 0.2, 0.7) == RegionKind::Two23);
    CHECK(kind_of(0.0, 0.0, 0.0) == RegionKind::Zero);
    CHECK(kind_of(0.1, 0.1, 0.1) == RegionKind::ConstraintViolation);
    CHECK(classify(single_node(0.1, 0.1, 0.1), 1e-8).violations == 16);
    CHECK(kind_of(0.5, 1e-9, 0.0) == RegionKind::Pure1);

    for (unsigned m = 0; m < 7; ++m) CHECK(support_mask(region_from_mask(m)) == m);
}

TEST_CASE("interface types from adjacent regions") {
    CHECK(infer_interface_type(RegionKind::Pure2, RegionKind::Pure1) == InterfaceType::I);
    CHECK(infer_interface_type(RegionKind::Pure1, RegionKind::Two12) == InterfaceType::IIa);
    CHECK(infer_interface_type(RegionKind::Two12, RegionKind::Pure1) == InterfaceType::IIb);
    CHECK(infer_interface_type(RegionKind::Two12, RegionKind::Two13) == InterfaceType::III);
    CHECK(infer_interface_type(RegionKind::Zero, RegionKind::Pure1) == InterfaceType::Untyped);
}

TEST_CASE("interface coordinates") {
    InterfaceGeometry line(LineShape{{0.5, 0.0}, pi / 2.0}, RegionKind::Pure2, RegionKind::Pure1);
    InterfaceCoords c = interface_coords(line, {0.6, 0.3});
    CHECK(c.s == doctest::Approx(0.1).epsilon(1e-14));
    const Vec2 foot = line.point(c.t);
    CHECK(foot.x == doctest::Approx(0.5));
    CHECK(foot.y == doctest::Approx(0.3));
    CHECK(interface_coords(line, {0.5, 0.8}).s == doctest::Approx(0.0).epsilon(1e-15));

    InterfaceGeometry circle(CircleShape{{0.5, 0.5}, 0.25}, RegionKind::Pure1, RegionKind::Pure2);
    CHECK(interface_coords(circle, {0.9, 0.5}).s == doctest::Approx(0.15).epsilon(1e-14));
    CHECK(interface_coords(circle, {0.5, 0.4}).s == doctest::Approx(-0.15).epsilon(1e-14));
    CHECK(circle.distance({0.5, 0.4}) == doctest::Approx(0.15));

    try {
        interface_coords(circle, {0.5, 0.5});
        FAIL("centre of a circle has no unique foot point");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutOfTube);
    }
}

TEST_CASE("tube jacobian against the polar area element") {
    InterfaceGeometry line(LineShape{{0.0, 0.0}, 0.3}, RegionKind::Pure2, RegionKind::Pure1);
    CHECK(jacobian(line, 0.0, 0.0) == 1.0);
    CHECK(jacobian(line, 0.7, 1.0) == 1.0);

    const double R = 0.25;
    InterfaceGeometry circle(CircleShape{{0.5, 0.5}, R}, RegionKind::Pure1, RegionKind::Pure2);
    CHECK(jacobian(circle, 0.0, 0.0) == 1.0);
    // area of the thin annulus [R+s, R+s+dr] divided by (arc length 2 pi R) * dr
    const double s = 0.1, dr = 1e-7;
    const double ratio = pi * ((R + s + dr) * (R + s + dr) - (R + s) * (R + s)) / (2.0 * pi * R * dr);
    CHECK(jacobian(circle, s, 0.0) == doctest::Approx(ratio).epsilon(1e-6));
    CHECK(jacobian(circle, s, 0.0) == doctest::Approx(1.4).epsilon(1e-14));

    try {
        jacobian(circle, -0.3, 0.0);
        FAIL("inside the centre the tube folds");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateTube);
    }
}

TEST_CASE("junction detection on a symmetric three-sector map") {
    Grid g = make_grid({-1.0, -1.0, 1.0, 1.0}, 64, 64);
    const double w = 2.0 * pi / 3.0;
    PhaseTriple t = sector_triple(g, pi / 6.0, w, w);
    RegionMap rm = classify(t, 1e-8);

    // independent count: a large ring crosses exactly three label changes
    CHECK(count_ring_runs(rm, 0.6) == 3);

    std::vector<JunctionSpec> js = detect_junctions(rm);
    REQUIRE(js.size() == 1);
    const double ring_resolution = 2.0 * g.hx() / (6.0 * g.hx());
    CHECK(std::abs(js[0].alpha1 - w) < ring_resolution);
    CHECK(std::abs(js[0].alpha2 - w) < ring_resolution);
    CHECK(norm(js[0].center) < 2.0 * g.hx());
    std::set<int> comps(js[0].sector_component.begin(), js[0].sector_component.end());
    CHECK(comps.size() == 3);
}

TEST_CASE("junction detection finds nothing without a triple point") {
    Grid g = make_grid({0.0, 0.0, 1.0, 1.0}, 32, 32);
    PhaseTriple two{ScalarField::sample(g, [](Vec2 p) { return std::max(0.0, p.x - 0.5); }),
                    ScalarField::sample(g, [](Vec2 p) { return std::max(0.0, 0.5 - p.x); }), ScalarField(g)};
    CHECK(detect_junctions(classify(two, 1e-8)).empty());

    PhaseTriple one{ScalarField(g, 1.0), ScalarField(g), ScalarField(g)};
    CHECK(detect_junctions(classify(one, 1e-8)).empty());
}

TEST_CASE("junction spec angles") {
    JunctionSpec j{{0.0, 0.0}, 2.0, 1.5, 0.5};
    CHECK(j.sector_width(2) == doctest::Approx(2.0 * pi - 3.5));
    CHECK(j.sector_start(1) == doctest::Approx(2.0));
    CHECK(j.local_angle({std::cos(0.5), std::sin(0.5)}) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(j.local_angle({std::cos(0.4), std::sin(0.4)}) == doctest::Approx(2.0 * pi - 0.1));
    CHECK(j.sector_of_component(2) == 2);

    JunctionSpec bad{{0.0, 0.0}, 4.0, 3.0, 0.0};
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("layer annotation priorities") {
    const Preset& p = find_preset("junction_symmetric");
    Grid g = make_grid(p.domain, 64, 64);
    PhaseTriple t = sample_triple(g, p.fixture);
    RegionMap rm = classify(t, default_zero_tolerance(t));
    const double eps = 1e-2;
    RegionMap an = annotate_layers(rm, eps, p.interfaces, p.junctions);
    CHECK(an.at(0, 10).kind == RegionKind::BoundaryLayer);
    CHECK(an.at(32, 32).kind == RegionKind::NearJunction);
    // far from everything the bulk label survives
    int bulk = 0;
    for (const auto& l : an.labels) bulk += is_bulk(l.kind) ? 1 : 0;
    CHECK(bulk > 0);
}
