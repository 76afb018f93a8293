#include <doctest.h>

#include <seglab/errors.hpp>
#include <seglab/profiles.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

using namespace seglab;
using std::numbers::pi;

namespace {

using big = boost::multiprecision::cpp_bin_float_50;

// tanh from the exponential series in 50 digits; no libm involved
big series_tanh(int x) {
    big e = 0, term = 1;
    for (int k = 1; k < 120; ++k) {
        e += term;
        term = term * (2 * x) / k;
    }
    return (e - 1) / (e + 1);
}

double sech4(double z) {
    const double c = 1.0 / std::cosh(z);
    return c * c * c * c;
}

JunctionSpec symmetric() {
    const double w = 2.0 * pi / 3.0;
    return JunctionSpec{{0.0, 0.0}, w, w, 0.0};
}

} // namespace

TEST_CASE("layer profiles") {
    CHECK(h_plus(0.0) == 0.5);
    for (double z : {-3.0, -1.0, 0.0, 1.0, 3.0}) CHECK(h_plus(z) + h_minus(z) == doctest::Approx(1.0).epsilon(1e-15));
    for (double z = -5.0; z < 5.0; z += 0.25) CHECK(h_plus(z + 0.25) > h_plus(z));
    CHECK(h_plus(-40.0) > 0.0);
    CHECK(h_plus(40.0) == 1.0);

    const double t1 = static_cast<double>(series_tanh(1));
    const double h1 = static_cast<double>((1 + series_tanh(1)) / 2);
    CHECK(h1 == doctest::Approx(0.8807970780).epsilon(1e-10));
    CHECK(h_plus(1.0) == doctest::Approx(h1).epsilon(1e-15));
    CHECK(t1 == doctest::Approx(0.7615941560).epsilon(1e-10));

    CHECK(psi_plus(-2.0) == 0.0);
    for (double z : {-1.0, 0.0, 1.0}) CHECK(psi_plus(z) * psi_minus(z) == 0.0);
    CHECK(psi_minus(-1.0) == doctest::Approx(t1).epsilon(1e-15));
    CHECK(psi_plus(1.0) == doctest::Approx(t1).epsilon(1e-15));
}

TEST_CASE("mollifier and ramp") {
    CHECK(ramp_rho(-0.5) == 0.0);
    CHECK(ramp_rho(1.5) == 1.0);
    CHECK(ramp_rho(0.5) == doctest::Approx(0.5).epsilon(1e-14));

    boost::math::quadrature::tanh_sinh<double> ts;
    const double mass = ts.integrate([](double t) { return std::exp(-1.0 / (t * (1.0 - t))); }, 0.0, 1.0);
    CHECK(mass == doctest::Approx(0.00702986).epsilon(1e-6));
    CHECK(mollifier_constant() == doctest::Approx(1.0 / mass).epsilon(1e-12));

    for (double t : {0.1, 0.3, 0.7, 0.95}) {
        const double ref = ts.integrate([](double s) { return std::exp(-1.0 / (s * (1.0 - s))); }, 0.0, t) / mass;
        CHECK(ramp_rho(t) == doctest::Approx(ref).epsilon(1e-11));
        CHECK(mollifier_eta(t) == doctest::Approx(std::exp(-1.0 / (t * (1.0 - t))) / mass).epsilon(1e-13));
    }
    // strict until rho rounds to 1 near the right end
    for (double t = 0.0; t < 0.89; t += 0.01) CHECK(ramp_rho(t + 0.01) > ramp_rho(t));
}

TEST_CASE("sech4 layer integrals") {
    CHECK(sech4_layer_integral(-INFINITY, INFINITY, 0.04) == doctest::Approx(4.0 * 0.2 / 3.0).epsilon(1e-14));
    CHECK(sech4_layer_integral(0.0, INFINITY, 0.04) == doctest::Approx(2.0 * 0.2 / 3.0).epsilon(1e-14));
    CHECK(sech4_first_moment(-INFINITY, INFINITY, 0.04) == 0.0);
    CHECK(std::abs(sech4_first_moment(-0.3, 0.3, 0.01)) <= 1e-14);

    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> le(-4.0, 0.0), u(-1.0, 1.0);
    for (int k = 0; k < 25; ++k) {
        const double eps = std::pow(10.0, le(rng));
        const double w = std::sqrt(eps);
        double a = 4.0 * w * u(rng), b = 4.0 * w * u(rng);
        if (a > b) std::swap(a, b);
        const double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double s) { return sech4(s / w); }, a, b, 15, 1e-14);
        const double mref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double s) { return s * sech4(s / w); }, a, b, 15, 1e-14);
        CHECK(std::abs(sech4_layer_integral(a, b, eps) - ref) <= 1e-10);
        CHECK(std::abs(sech4_first_moment(a, b, eps) - mref) <= 1e-10);
    }
}

TEST_CASE("angular cutoffs") {
    const JunctionSpec j = symmetric();
    const double mid = j.sector_start(0) + 0.5 * j.sector_width(0);
    double prev = 0.0;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const double v = angular_cutoff(0, mid, eps, j, ProfileFamily::SmoothTanh);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK(prev == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(angular_cutoff(0, 0.0, 1e-3, j, ProfileFamily::SmoothTanh) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(angular_cutoff(0, 0.0, 1e-3, j, ProfileFamily::CompactRamp) == doctest::Approx(0.5).epsilon(1e-12));

    // CompactRamp at eps = 1e-2: the three cutoffs never overlap all at once,
    // and any two overlap only within 2 sqrt(eps) of their shared edge
    const double eps = 1e-2, w = std::sqrt(eps);
    for (int n = 0; n < 20000; ++n) {
        const double th = 2.0 * pi * n / 20000.0;
        const double c0 = angular_cutoff(0, th, eps, j, ProfileFamily::CompactRamp);
        const double c1 = angular_cutoff(1, th, eps, j, ProfileFamily::CompactRamp);
        const double c2 = angular_cutoff(2, th, eps, j, ProfileFamily::CompactRamp);
        CHECK(c0 * c1 * c2 == 0.0);
        CHECK(c0 + c1 + c2 == doctest::Approx(1.0).epsilon(1e-12));
        auto near = [&](double edge) {
            double d = std::remainder(th - edge, 2.0 * pi);
            return std::abs(d) < w + 1e-12;
        };
        if (c0 * c2 > 0.0) CHECK(near(0.0));
        if (c0 * c1 > 0.0) CHECK(near(j.sector_start(1)));
        if (c1 * c2 > 0.0) CHECK(near(j.sector_start(2)));
        if (th > w && th < 2.0 * pi - w) CHECK(c0 * c2 == 0.0);
    }

    JunctionSpec narrow{{0.0, 0.0}, 0.3, 2.0, 0.0};
    try {
        angular_cutoff(0, 0.1, 1e-2, narrow, ProfileFamily::CompactRamp);
        FAIL("a 0.3 rad sector is narrower than 4 sqrt(eps)");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateSector);
    }
}

TEST_CASE("cutoff derivative matches finite differences") {
    const JunctionSpec j{{0.0, 0.0}, 2.0, 2.5, 0.4};
    for (ProfileFamily f : {ProfileFamily::SmoothTanh, ProfileFamily::CompactRamp})
        for (double th : {0.1, 0.45, 2.3, 2.45, 4.0, 4.9, 6.2}) {
            const double h = 1e-6;
            const double fd =
                (angular_cutoff(1, th + h, 1e-2, j, f) - angular_cutoff(1, th - h, 1e-2, j, f)) / (2.0 * h);
            CHECK(angular_cutoff_profile(1, th, 1e-2, j, f).slope == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
        }
}

TEST_CASE("radial regulariser") {
    const double eps = 1e-2;
    CHECK(radial_regularizer(0.0, eps, 1.0) == 0.0);
    CHECK(radial_regularizer(2.0 * std::sqrt(eps), eps, 1.0) == 1.0);
    CHECK(radial_regularizer(std::sqrt(eps), eps, 1.0) == doctest::Approx(0.5));
    CHECK(radial_regularizer(std::sqrt(eps), eps, 2.0) == doctest::Approx(0.25));
    CHECK(radial_regularizer(1.0, eps, 3.0) == 1.0);
    CHECK_THROWS_AS(radial_regularizer(0.1, eps, 0.5), Error);
}

TEST_CASE("junction asymptotic profile") {
    CHECK(junction_profile(1, 0.7, 0.0) == 0.0);
    CHECK(junction_profile(1, 1.0, 2.0 * pi / 3.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(junction_profile(2, 1.0, 2.0 * pi / 3.0) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(junction_profile(1, 16.0, 2.0 * pi / 3.0) == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(junction_profile_positive(2, 1.0, 2.0 * pi / 3.0) == 0.0);
}
