#include "seglab/output.hpp"

#include "seglab/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>

namespace seglab {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

// Piecewise-linear approximation of viridis, t in [0, 1].
std::string colour(double t) {
    static constexpr std::array<std::array<double, 3>, 5> stops{{
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
    if (!std::isfinite(t)) t = 0.0;
    t = std::clamp(t, 0.0, 1.0) * 4.0;
    const int k = std::min(3, static_cast<int>(t));
    const double f = t - k;
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                  static_cast<int>(std::lround(stops[k][0] + f * (stops[k + 1][0] - stops[k][0]))),
                  static_cast<int>(std::lround(stops[k][1] + f * (stops[k + 1][1] - stops[k][1]))),
                  static_cast<int>(std::lround(stops[k][2] + f * (stops[k + 1][2] - stops[k][2]))));
    return buf;
}

const char* region_colour(RegionKind k) {
    switch (k) {
    case RegionKind::Pure1: return "#d62728";
    case RegionKind::Pure2: return "#2ca02c";
    case RegionKind::Pure3: return "#1f77b4";
    case RegionKind::Two12: return "#bcbd22";
    case RegionKind::Two13: return "#9467bd";
    case RegionKind::Two23: return "#17becf";
    case RegionKind::Zero: return "#ffffff";
    case RegionKind::ConstraintViolation: return "#000000";
    default: return "#7f7f7f";
    }
}

template <class Fill>
void heatmap(std::ostream& os, const Grid& g, const std::string& title, int max_cells, Fill fill) {
    const int sx = std::max(1, (g.nodes_x() + max_cells - 1) / max_cells);
    const int sy = std::max(1, (g.nodes_y() + max_cells - 1) / max_cells);
    const int cols = (g.nodes_x() + sx - 1) / sx, rows = (g.nodes_y() + sy - 1) / sy;
    const double px = 480.0 / cols, py = 480.0 / rows;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"520\" height=\"540\" viewBox=\"0 0 520 540\">\n"
       << "<text x=\"20\" y=\"22\" font-family=\"sans-serif\" font-size=\"14\">" << esc(title) << "</text>\n"
       << "<g transform=\"translate(20,40)\" shape-rendering=\"crispEdges\">\n";
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            // y grows upwards in the field, downwards in SVG
            os << "<rect x=\"" << num(c * px) << "\" y=\"" << num((rows - 1 - r) * py) << "\" width=\"" << num(px)
               << "\" height=\"" << num(py) << "\" fill=\"" << fill(c * sx, r * sy) << "\"/>\n";
        }
    os << "</g>\n</svg>\n";
}

struct Axis {
    double lo, hi;
    double map(double v, double a, double b) const { return a + (v - lo) / (hi - lo) * (b - a); }
};

Axis padded(double lo, double hi) {
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

void frame(std::ostream& os, const std::string& title, const Axis& ax, const Axis& ay, const std::string& xl,
           const std::string& yl) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"560\" height=\"420\" viewBox=\"0 0 560 420\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"560\" height=\"420\" fill=\"white\"/>\n"
       << "<text x=\"70\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << esc(title) << "</text>\n"
       << "<rect x=\"70\" y=\"40\" width=\"460\" height=\"320\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double vx = ax.lo + k * (ax.hi - ax.lo) / 4.0, vy = ay.lo + k * (ay.hi - ay.lo) / 4.0;
        const double x = 70 + 460.0 * k / 4.0, y = 360 - 320.0 * k / 4.0;
        os << "<text x=\"" << num(x) << "\" y=\"378\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">"
           << num(vx) << "</text>\n"
           << "<text x=\"64\" y=\"" << num(y + 3) << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">"
           << num(vy) << "</text>\n";
    }
    os << "<text x=\"300\" y=\"404\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" << esc(xl)
       << "</text>\n"
       << "<text x=\"16\" y=\"200\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 200)\" "
          "text-anchor=\"middle\">"
       << esc(yl) << "</text>\n";
}

} // namespace

void ensure_directory(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) fail(ErrorCode::Config, "cannot create output directory '" + dir + "': " + ec.message());
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) fail(ErrorCode::Config, "cannot open " + path + " for writing");
    os << text;
}

void write_triple_csv(const std::string& dir, const std::string& stem, const PhaseTriple& t) {
    for (int c = 0; c < 3; ++c) write_field_csv(dir + "/" + stem + "_u" + std::to_string(c + 1) + ".csv", t[c]);
}

void write_breakdown_csv(std::ostream& os, double eps, const std::string& geometry, const EnergyBreakdown& b,
                         bool header) {
    if (header) os << "eps,geometry,quantity,value\n";
    char e[32];
    std::snprintf(e, sizeof e, "%.17g", eps);
    auto row = [&](const std::string& q, double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << e << ',' << geometry << ',' << q << ',' << buf << '\n';
    };
    for (int c = 0; c < 3; ++c) row("dirichlet_u" + std::to_string(c + 1), b.dirichlet[static_cast<std::size_t>(c)]);
    row("penalty", b.penalty);
    row("total_eps", b.total_eps);
    row("total_constrained", b.total_constrained ? *b.total_constrained : std::numeric_limits<double>::infinity());
    for (const auto& [k, v] : b.per_region) row("region_" + to_string(k), v);
    for (std::size_t j = 0; j < b.junction_ball.size(); ++j) {
        row("junction" + std::to_string(j) + "_EA", b.junction_ball[j].ea);
        row("junction" + std::to_string(j) + "_EB", b.junction_ball[j].eb);
    }
}

void write_field_svg(std::ostream& os, const ScalarField& u, const std::string& title, int max_cells) {
    const double lo = u.min_value(), hi = u.max_value();
    const double span = hi > lo ? hi - lo : 1.0;
    heatmap(os, u.grid(), title + " [" + num(lo) + ", " + num(hi) + "]", max_cells,
            [&](int i, int j) { return colour((u(i, j) - lo) / span); });
}

void write_region_svg(std::ostream& os, const RegionMap& rm, const std::string& title, int max_cells) {
    heatmap(os, rm.grid, title, max_cells, [&](int i, int j) { return std::string(region_colour(rm.at(i, j).kind)); });
}

void write_loglog_svg(std::ostream& os, const std::vector<SweepRecord>& records, const std::string& title) {
    std::vector<double> x, y;
    for (const auto& r : records)
        if (r.value > 0.0 && r.eps > 0.0) {
            x.push_back(std::log10(r.eps));
            y.push_back(std::log10(r.value));
        }
    if (x.empty()) {
        frame(os, title + " (no positive values)", {0, 1}, {0, 1}, "log10 eps", "log10 value");
        os << "</svg>\n";
        return;
    }
    const Axis ax = padded(*std::min_element(x.begin(), x.end()), *std::max_element(x.begin(), x.end()));
    const Axis ay = padded(*std::min_element(y.begin(), y.end()), *std::max_element(y.begin(), y.end()));
    std::string label = title;
    std::optional<SlopeFit> fit;
    if (x.size() >= 3) {
        try {
            fit = fit_line(x, y);
            label += "  slope " + num(fit->slope) + ", r2 " + num(fit->r2);
        } catch (const Error&) {
        }
    }
    frame(os, label, ax, ay, "log10 eps", "log10 value");
    if (fit) {
        const double x0 = ax.lo, x1 = ax.hi;
        os << "<line x1=\"" << num(ax.map(x0, 70, 530)) << "\" y1=\"" << num(ay.map(fit->intercept + fit->slope * x0, 360, 40))
           << "\" x2=\"" << num(ax.map(x1, 70, 530)) << "\" y2=\"" << num(ay.map(fit->intercept + fit->slope * x1, 360, 40))
           << "\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n";
    }
    for (std::size_t k = 0; k < x.size(); ++k)
        os << "<circle cx=\"" << num(ax.map(x[k], 70, 530)) << "\" cy=\"" << num(ay.map(y[k], 360, 40))
           << "\" r=\"4\" fill=\"#1f77b4\"/>\n";
    os << "</svg>\n";
}

void write_convergence_svg(std::ostream& os, const std::vector<ConvergenceEntry>& log, const std::string& title) {
    std::vector<double> x, y;
    for (const auto& e : log)
        if (e.residual > 0.0) {
            x.push_back(e.iteration);
            y.push_back(std::log10(e.residual));
        }
    if (x.empty()) {
        frame(os, title + " (residual 0)", {0, 1}, {0, 1}, "iteration", "log10 residual");
        os << "</svg>\n";
        return;
    }
    const Axis ax = padded(x.front(), x.back());
    const Axis ay = padded(*std::min_element(y.begin(), y.end()), *std::max_element(y.begin(), y.end()));
    frame(os, title, ax, ay, "iteration", "log10 residual");
    os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < x.size(); ++k)
        os << (k ? " " : "") << num(ax.map(x[k], 70, 530)) << ',' << num(ay.map(y[k], 360, 40));
    os << "\"/>\n</svg>\n";
}

} // namespace seglab
