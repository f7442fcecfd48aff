#pragma once

namespace robin {

/// Modified Bessel function of the second kind K_m(x), x > 0, m >= 0.
/// Series kernels for small x, continued fraction for the mid range,
/// asymptotic expansion for large x, stable upward recurrence in the order.
double bessel_k(int m, double x);

/// -x K_m'(x) / K_m(x), evaluated through the recurrence
/// K_{m-1} + K_{m+1} = -2 K_m'. Strictly increasing in x, tends to m as
/// x -> 0+, and always exceeds x.
double bessel_k_logderiv(int m, double x);

/// Bound state of the Robin problem exterior to a disc of radius `radius`
/// at angular momentum m: the root of -u K_m'(u)/K_m(u) = beta*radius.
struct DiscExteriorState {
    double radius = 0;
    double beta = 0;
    int m = 0;
    double alpha_scaled = 0;  // beta * radius
    double u_root = 0;        // k * radius
    double eigenvalue = 0;    // -(u_root/radius)^2
    int multiplicity = 1;     // 1 for m = 0, else 2
};

DiscExteriorState disc_exterior_eigenvalue(double radius, double beta, int m);

/// Two-term large-beta expansion -(beta - 1/(2R))^2 + (m^2 - 1/4)/R^2.
double disc_exterior_asymptotic(double radius, double beta, int m);

/// The quadrant has exactly one simple eigenvalue -2 beta^2 (beta = 0
/// degenerates to the threshold 0, not an eigenvalue).
double quadrant_eigenvalue(double beta);

/// Essential spectrum threshold -beta^2 of the Robin halfplane.
double halfplane_threshold(double beta);

} // namespace robin
