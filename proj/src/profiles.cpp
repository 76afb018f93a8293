#include "seglab/profiles.hpp"

#include "seglab/errors.hpp"
#include "seglab/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace seglab {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double bump(double t) { return (t <= 0.0 || t >= 1.0) ? 0.0 : std::exp(-1.0 / (t * (1.0 - t))); }

// integral of the unnormalised bump over [0, t], t in [0, 1/2]
double bump_integral(double t) {
    if (t <= 0.0) return 0.0;
    return integrate(bump, 0.0, t, 24, 6);
}

double sech2(double z) {
    const double c = std::cosh(z);
    return std::isinf(c) ? 0.0 : 1.0 / (c * c);
}

// antiderivative of sech^4 in the scaled variable
double sech4_primitive(double z) {
    if (std::isinf(z)) return z > 0 ? 2.0 / 3.0 : -2.0 / 3.0;
    const double t = std::tanh(z);
    return t - t * t * t / 3.0;
}

// antiderivative of z sech^4 z: z F(z) - (2/3) log cosh z - tanh^2 z / 6, written without cancellation
double sech4_moment_primitive(double z) {
    const double ln2 = std::numbers::ln2;
    if (std::isinf(z)) return 2.0 / 3.0 * ln2 - 1.0 / 6.0;
    const double az = std::abs(z);
    const double t = std::tanh(az);
    // F(|z|) - 2/3 = -(1 - t)^2 (2 + t) / 3
    const double f_minus = -(1.0 - t) * (1.0 - t) * (2.0 + t) / 3.0;
    const double log_cosh_minus = std::log1p(std::exp(-2.0 * az)) - ln2; // log cosh z - |z|
    return az * f_minus - 2.0 / 3.0 * log_cosh_minus - t * t / 6.0;
}

double wrap_pm_pi(double a) {
    a = std::fmod(a + std::numbers::pi, two_pi);
    if (a < 0.0) a += two_pi;
    return a - std::numbers::pi;
}

} // namespace

std::string to_string(ProfileFamily f) { return f == ProfileFamily::SmoothTanh ? "tanh" : "ramp"; }

ProfileFamily parse_profile_family(const std::string& s) {
    if (s == "tanh" || s == "SmoothTanh") return ProfileFamily::SmoothTanh;
    if (s == "ramp" || s == "CompactRamp") return ProfileFamily::CompactRamp;
    fail(ErrorCode::InvalidArgument, "unknown profile family '" + s + "'");
}

// (1 + tanh z)/2 = 1/(1 + e^{-2z}); the logistic form keeps the far tail instead of rounding it to 0
double h_plus(double z) { return 1.0 / (1.0 + std::exp(-2.0 * z)); }
double h_minus(double z) { return h_plus(-z); }
double psi_plus(double z) { return z > 0.0 ? std::tanh(z) : 0.0; }
double psi_minus(double z) { return z < 0.0 ? -std::tanh(z) : 0.0; }

double mollifier_constant() {
    static const double c = 1.0 / (2.0 * bump_integral(0.5));
    return c;
}

double mollifier_eta(double t) { return mollifier_constant() * bump(t); }

double ramp_rho(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    if (t <= 0.5) return mollifier_constant() * bump_integral(t);
    return 1.0 - mollifier_constant() * bump_integral(1.0 - t);
}

Profile1D step_up(double z, ProfileFamily f) {
    if (f == ProfileFamily::SmoothTanh) return {h_plus(z), 0.5 * sech2(z)};
    const double t = 0.5 * (z + 1.0);
    return {ramp_rho(t), 0.5 * mollifier_eta(t)};
}

Profile1D onset(double z, ProfileFamily f) {
    if (f == ProfileFamily::SmoothTanh) return z > 0.0 ? Profile1D{std::tanh(z), sech2(z)} : Profile1D{};
    return {ramp_rho(z), mollifier_eta(z)};
}

double sech4_layer_integral(double a, double b, double eps) {
    require(eps > 0.0, "eps must be positive");
    require(a <= b, "integration limits out of order");
    const double w = std::sqrt(eps);
    return w * (sech4_primitive(b / w) - sech4_primitive(a / w));
}

double sech4_first_moment(double a, double b, double eps) {
    require(eps > 0.0, "eps must be positive");
    require(a <= b, "integration limits out of order");
    const double w = std::sqrt(eps);
    // G is even in z
    const double val = sech4_moment_primitive(b / w) - sech4_moment_primitive(a / w);
    return eps * val;
}

void check_sector_widths(const JunctionSpec& j, double eps) {
    require(eps > 0.0, "eps must be positive");
    j.validate();
    const double min_width = 4.0 * std::sqrt(eps);
    for (int k = 0; k < 3; ++k)
        if (!(j.sector_width(k) > min_width))
            fail(ErrorCode::DegenerateSector, "sector " + std::to_string(k + 1) + " narrower than 4 sqrt(eps)");
}

Profile1D angular_cutoff_profile(int sector, double theta, double eps, const JunctionSpec& j, ProfileFamily f) {
    require(sector >= 0 && sector < 3, "sector index out of range");
    check_sector_widths(j, eps);
    const double w = std::sqrt(eps);
    const double width = j.sector_width(sector);
    const double phi = wrap_pm_pi(theta - (j.sector_start(sector) + 0.5 * width));
    const Profile1D up = step_up((phi + 0.5 * width) / w, f);
    const Profile1D down = step_up((phi - 0.5 * width) / w, f);
    // chi = up * (1 - down); for tanh, 1 - H+ = H- exactly as in the closed form
    const double down_c = f == ProfileFamily::SmoothTanh ? h_minus((phi - 0.5 * width) / w) : 1.0 - down.value;
    return {up.value * down_c, (up.slope * down_c - up.value * down.slope) / w};
}

double angular_cutoff(int sector, double theta, double eps, const JunctionSpec& j, ProfileFamily f) {
    return angular_cutoff_profile(sector, theta, eps, j, f).value;
}

Profile1D radial_regularizer_profile(double r, double eps, double delta) {
    require(eps > 0.0, "eps must be positive");
    require(delta >= 1.0, "radial exponent delta must be >= 1");
    require(r >= 0.0, "radius must be non-negative");
    const double scale = 2.0 * std::sqrt(eps);
    if (r >= scale) return {1.0, 0.0};
    const double q = r / scale;
    return {std::pow(q, delta), delta * std::pow(q, delta - 1.0) / scale};
}

double radial_regularizer(double r, double eps, double delta) { return radial_regularizer_profile(r, eps, delta).value; }

double junction_profile(int i, double r, double theta) {
    require(i >= 1 && i <= 3, "component index must be 1, 2 or 3");
    require(r >= 0.0, "radius must be non-negative");
    return std::pow(r, 0.75) * std::sin(0.75 * theta - 2.0 * (i - 1) * std::numbers::pi / 3.0);
}

double junction_profile_positive(int i, double r, double theta) { return std::max(0.0, junction_profile(i, r, theta)); }

double junction_profile_positive_dtheta(int i, double r, double theta) {
    if (junction_profile(i, r, theta) <= 0.0) return 0.0;
    return 0.75 * std::pow(r, 0.75) * std::cos(0.75 * theta - 2.0 * (i - 1) * std::numbers::pi / 3.0);
}

} // namespace seglab
