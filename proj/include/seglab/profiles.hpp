#pragma once

#include "seglab/geometry.hpp"

namespace seglab {

enum class ProfileFamily {
    SmoothTanh,  ///< literal tanh steps; products of cutoffs are exponentially small
    CompactRamp, ///< mollifier-ramp steps of the same width; exactly 0/1 outside the band
};

std::string to_string(ProfileFamily f);
ProfileFamily parse_profile_family(const std::string& s);

// One-dimensional layer profiles.
double h_plus(double z);
double h_minus(double z);
double psi_plus(double z);
double psi_minus(double z);

/// Normalisation constant C of the mollifier eta(t) = C exp(-1/(t(1-t))) on (0, 1).
double mollifier_constant();
double mollifier_eta(double t);
/// rho(t) = integral of eta over [0, t]; 0 for t <= 0, 1 for t >= 1.
double ramp_rho(double t);

/// Value and derivative of a profile at one point.
struct Profile1D {
    double value = 0.0;
    double slope = 0.0;
};

/// Monotone step from 0 to 1 centred at z = 0 (H+ for tanh, rho((z+1)/2) for ramps).
Profile1D step_up(double z, ProfileFamily f);
/// One-sided onset for z > 0 (psi+ for tanh, rho(z) for ramps).
Profile1D onset(double z, ProfileFamily f);

/// Integral of sech^4(s / sqrt(eps)) over [a, b]; infinite limits allowed.
double sech4_layer_integral(double a, double b, double eps);
/// Integral of s sech^4(s / sqrt(eps)) over [a, b].
double sech4_first_moment(double a, double b, double eps);

/// Angular cutoff chi_k of sector k at the local angle theta (measured from theta0).
/// Throws DegenerateSector if any sector is narrower than 4 sqrt(eps).
double angular_cutoff(int sector, double theta, double eps, const JunctionSpec& j, ProfileFamily f);
Profile1D angular_cutoff_profile(int sector, double theta, double eps, const JunctionSpec& j, ProfileFamily f);
void check_sector_widths(const JunctionSpec& j, double eps);

/// (r / (2 sqrt(eps)))^delta, clamped to 1 beyond r = 2 sqrt(eps); delta >= 1.
double radial_regularizer(double r, double eps, double delta);
Profile1D radial_regularizer_profile(double r, double eps, double delta);

/// Leading junction asymptotics r^{3/4} sin(3 theta / 4 - 2 (i-1) pi / 3), i in {1, 2, 3}.
double junction_profile(int i, double r, double theta);
/// Positive part of junction_profile.
double junction_profile_positive(int i, double r, double theta);
/// d/dtheta of the positive part at fixed r.
double junction_profile_positive_dtheta(int i, double r, double theta);

} // namespace seglab
