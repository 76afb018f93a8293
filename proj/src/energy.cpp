#include "seglab/energy.hpp"

#include "seglab/errors.hpp"
#include "seglab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace seglab {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double max_abs(const PhaseTriple& t) {
    double m = 0.0;
    for (int c = 0; c < 3; ++c)
        for (double v : t[c].values()) m = std::max(m, std::abs(v));
    return m;
}

// angular distance on the circle
double circle_gap(double a, double b) {
    double d = std::fmod(std::abs(a - b), two_pi);
    return std::min(d, two_pi - d);
}

bool in_transition_band(double theta, const JunctionSpec& j, double eps) {
    const double half = 2.0 * std::sqrt(eps);
    for (int k = 0; k < 3; ++k)
        if (circle_gap(theta, j.sector_start(k)) < half) return true;
    return false;
}

// One edge of the forward-difference stencil: weight times squared jump.
struct Edge {
    int i, j;     // lower-left endpoint
    Vec2 mid;
    double value; // summed over components
};

} // namespace

double penalty(const PhaseTriple& t, double eps) {
    require(eps > 0.0, "eps must be positive");
    const double n = l2_norm(product_field(t));
    return n * n / eps;
}

double default_feasibility_tolerance(const PhaseTriple& t) {
    const double s = max_abs(t);
    return 1e-10 * s * s * s;
}

EnergyBreakdown energy_eps(const PhaseTriple& t, double eps, const RegionMap* regions,
                           const std::vector<JunctionSpec>& junctions) {
    check_common_grid(t);
    EnergyBreakdown b;
    for (int c = 0; c < 3; ++c) b.dirichlet[static_cast<std::size_t>(c)] = dirichlet_energy(t[c]);
    b.penalty = penalty(t, eps);
    b.total_eps = b.dirichlet_total() + b.penalty;
    b.total_constrained = energy_constrained(t);

    if (regions) {
        require(regions->grid == t.grid(), "region map lives on a different grid");
        const Grid& g = t.grid();
        std::map<RegionKind, std::vector<double>> bins;
        const double cx = g.hy() / g.hx(), cy = g.hx() / g.hy();
        for (int c = 0; c < 3; ++c) {
            const ScalarField& u = t[c];
            for (int j = 0; j <= g.ny(); ++j)
                for (int i = 0; i <= g.nx(); ++i) {
                    auto& bin = bins[regions->at(i, j).kind];
                    if (i < g.nx()) {
                        const double wy = (j == 0 || j == g.ny()) ? 0.5 : 1.0;
                        const double d = u(i + 1, j) - u(i, j);
                        bin.push_back(wy * cx * d * d);
                    }
                    if (j < g.ny()) {
                        const double wx = (i == 0 || i == g.nx()) ? 0.5 : 1.0;
                        const double d = u(i, j + 1) - u(i, j);
                        bin.push_back(wx * cy * d * d);
                    }
                }
        }
        for (auto& [kind, terms] : bins) b.per_region[kind] = pairwise_sum(terms);
    }
    for (const auto& j : junctions) b.junction_ball.push_back(junction_ball_split(t, j, eps));
    return b;
}

std::optional<double> energy_constrained(const PhaseTriple& t, double tol) {
    check_common_grid(t);
    if (tol <= 0.0) tol = default_feasibility_tolerance(t);
    for (int c = 0; c < 3; ++c)
        if (t[c].min_value() < 0.0) return std::nullopt;
    if (l2_norm(product_field(t)) > tol) return std::nullopt;
    return dirichlet_energy(t[0]) + dirichlet_energy(t[1]) + dirichlet_energy(t[2]);
}

PhaseTriple energy_gradient(const PhaseTriple& t, double eps) {
    check_common_grid(t);
    require(eps > 0.0, "eps must be positive");
    const Grid& g = t.grid();
    PhaseTriple out{ScalarField(g), ScalarField(g), ScalarField(g)};
    const double ax = 1.0 / (g.hx() * g.hx()), ay = 1.0 / (g.hy() * g.hy());
    const double area = g.hx() * g.hy();
    for (int c = 0; c < 3; ++c) {
        const ScalarField& u = t[c];
        const ScalarField& v = t[(c + 1) % 3];
        const ScalarField& w = t[(c + 2) % 3];
        for (int j = 1; j < g.ny(); ++j)
            for (int i = 1; i < g.nx(); ++i) {
                const double lap = (u(i - 1, j) - 2.0 * u(i, j) + u(i + 1, j)) * ax +
                                   (u(i, j - 1) - 2.0 * u(i, j) + u(i, j + 1)) * ay;
                const double others = v(i, j) * v(i, j) * w(i, j) * w(i, j);
                out[c](i, j) = 2.0 * area * (-lap + u(i, j) * others / eps);
            }
    }
    return out;
}

std::vector<double> junction_profile_kinks() {
    std::vector<double> out;
    for (int i = 1; i <= 3; ++i)
        for (int k = -3; k <= 3; ++k) {
            const double th = 4.0 / 3.0 * (k * std::numbers::pi + 2.0 * (i - 1) * std::numbers::pi / 3.0);
            if (th > 0.0 && th < two_pi) out.push_back(th);
        }
    std::sort(out.begin(), out.end());
    return out;
}

JunctionBallEnergy junction_ball_split(const JunctionPatch& patch, const std::vector<double>& kinks, PolarQuadrature q) {
    const JunctionSpec& j = patch.spec();
    const double eps = patch.eps();
    const double w = std::sqrt(eps);
    const double radius = w;

    // panel breakpoints: sector edges, band edges, cutoff transition edges, data kinks
    std::vector<double> cuts{0.0, two_pi};
    auto add = [&cuts](double a) {
        a = std::fmod(a, two_pi);
        if (a < 0.0) a += two_pi;
        cuts.push_back(a);
    };
    for (int k = 0; k < 3; ++k) {
        const double e = j.sector_start(k);
        for (double off : {-2.0 * w, -w, 0.0, w, 2.0 * w}) add(e + off);
    }
    for (double a : kinks) add(a);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double a, double b) { return b - a < 1e-14; }), cuts.end());

    const int panels = static_cast<int>(cuts.size()) - 1;
    const int order = std::max(8, q.angular_nodes / panels + 1);
    const GaussRule& ang = gauss_legendre(order);
    const GaussRule& rad = gauss_legendre(q.radial_nodes);

    JunctionBallEnergy e;
    std::vector<double> a_terms, b_terms;
    for (int p = 0; p < panels; ++p) {
        const double lo = cuts[static_cast<std::size_t>(p)], hi = cuts[static_cast<std::size_t>(p) + 1];
        if (hi - lo <= 0.0) continue;
        const bool band = in_transition_band(0.5 * (lo + hi), j, eps);
        double panel = 0.0;
        for (std::size_t a = 0; a < ang.nodes.size(); ++a) {
            const double theta = 0.5 * (lo + hi) + 0.5 * (hi - lo) * ang.nodes[a];
            double ring = 0.0;
            for (std::size_t b = 0; b < rad.nodes.size(); ++b) {
                const double r = 0.5 * radius * (1.0 + rad.nodes[b]);
                const auto gp = patch.gradient_polar(r, theta);
                double dens = 0.0;
                for (std::size_t c = 0; c < 3; ++c) dens += gp.dr[c] * gp.dr[c] + gp.dtheta[c] * gp.dtheta[c] / (r * r);
                ring += rad.weights[b] * dens * r;
            }
            panel += ang.weights[a] * 0.5 * radius * ring;
        }
        (band ? b_terms : a_terms).push_back(0.5 * (hi - lo) * panel);
    }
    e.ea = pairwise_sum(a_terms);
    e.eb = pairwise_sum(b_terms);
    return e;
}

JunctionBallEnergy junction_ball_split(const PhaseTriple& t, const JunctionSpec& j, double eps) {
    check_common_grid(t);
    require(eps > 0.0, "eps must be positive");
    const Grid& g = t.grid();
    const double radius = std::sqrt(eps);
    if (!(g.extent().boundary_distance(j.center) > radius))
        fail(ErrorCode::InvalidGeometry, "junction ball B(sqrt(eps)) leaves the domain");
    const double cx = g.hy() / g.hx(), cy = g.hx() / g.hy();
    std::vector<double> a_terms, b_terms;
    for (int jj = 0; jj <= g.ny(); ++jj)
        for (int i = 0; i <= g.nx(); ++i)
            for (int dir = 0; dir < 2; ++dir) {
                const int i2 = i + (dir == 0), j2 = jj + (dir == 1);
                if (i2 > g.nx() || j2 > g.ny()) continue;
                const Vec2 mid = 0.5 * (g.node(i, jj) + g.node(i2, j2));
                if (j.radius(mid) >= radius) continue;
                double v = 0.0;
                for (int c = 0; c < 3; ++c) {
                    const double d = t[c](i2, j2) - t[c](i, jj);
                    v += (dir == 0 ? cx : cy) * d * d;
                }
                (in_transition_band(j.local_angle(mid), j, eps) ? b_terms : a_terms).push_back(v);
            }
    return {pairwise_sum(a_terms), pairwise_sum(b_terms)};
}

} // namespace seglab
