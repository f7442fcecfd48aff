#pragma once

#include "robin/geometry.hpp"
#include "robin/strip2d.hpp"

#include <optional>
#include <utility>

namespace robin {

/// Localized trial function chi((s - peak + (2 index - 1) eps)/(2 eps)) *
/// (exp(-alpha u) - exp(-2 a alpha + u alpha)); distinct indices have
/// disjoint longitudinal supports.
struct TrialSpec {
    int index = 1;           // j >= 1
    double bump_halfwidth;   // eps
    double decay_rate;       // alpha
    double peak;             // s*
};

/// Smooth bump exp(-1/(x(1-x))) on (0,1), zero outside.
double trial_bump(double x);
double trial_bump_deriv(double x);

double trial_longitudinal(const TrialSpec& spec, double s);
double trial_longitudinal_deriv(const TrialSpec& spec, double s);
std::pair<double, double> trial_support(const TrialSpec& spec);

/// Defaults from the model: alpha = beta + gamma_max/2 (interior) or
/// beta - gamma_min/2 (exterior), eps = beta^{-1/3}, peak at the relevant
/// curvature extremum.
TrialSpec default_trial(const StripModel& model, int index = 1);

struct TrialBound {
    double value = 0;      // Rayleigh quotient: upper bound for lambda_j
    double kinetic_s = 0;  // form terms, reported separately
    double kinetic_u = 0;
    double potential = 0;
    double boundary = 0;
    double norm_sq = 0;
};

/// Rayleigh quotient of the trial function in the Dirichlet-far strip form,
/// by 2D adaptive quadrature of the exact form terms.
TrialBound trial_rayleigh_bound(const StripModel& model, const TrialSpec& spec);

/// Smooth plateau: 1 on |x| <= 1, 0 on |x| >= 2.
double plateau(double x);
double plateau_deriv(double x);

struct DeformationResult {
    double limit = 0;          // closed-form limit integral
    double functional_value = 0;  // S_n (NaN when the curve is not graph-type)
    double gradient_term = 0;  // int |psi_n'|^2 e^{-2 rate y}
    bool functional_available = false;
};

/// Existence functional S[f_n] for f_n = plateau(x/scale) * exp(-rate y) and
/// its n -> infinity limit along the boundary. `rate` defaults to beta when
/// passed as 0. Flat boundary tails require rate == beta for convergence.
DeformationResult deformation_functional(const BoundaryCurve& curve, double beta,
                                         int scale, double rate = 0.0);

} // namespace robin
