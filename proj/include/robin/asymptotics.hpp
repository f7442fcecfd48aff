#pragma once

#include <span>
#include <vector>

namespace robin {

enum class ProblemSide { interior, exterior };

/// Two-term strong-coupling prediction -beta^2 - gamma_max * beta for the
/// deformed halfplane/wedge family (local convexity gamma_max > 0 binds).
double predict_interior(double gamma_max, double beta);

/// Exterior analogue -beta^2 + gamma_min_ext * beta.
double predict_exterior(double gamma_min_ext, double beta);

/// Refined lower bound carrying the comparison eigenvalue:
/// interior -(beta + gamma_max/2)^2 + mu_j, exterior -(beta - gamma_min/2)^2 + mu_j.
double predict_refined_lower(double gamma_extremum, double mu_j, double beta,
                             ProblemSide side);

/// Waveguide prediction -beta^2 - max(gamma_max, -gamma_parallel_min) * beta,
/// where gamma_parallel_min is the curvature minimum of the offset wall.
double predict_waveguide(double gamma_max, double gamma_parallel_min, double beta);

struct ExponentFit {
    double exponent = 0;
    double r_squared = 0;
    bool degenerate = false;  // some residual vanished; no fit possible
};

/// Least-squares slope of log|residual| against log(beta).
ExponentFit fit_remainder_exponent(std::span<const double> betas,
                                   std::span<const double> residuals);

} // namespace robin
