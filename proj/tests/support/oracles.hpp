#pragma once

#include "robin/transverse1d.hpp"

namespace robin::oracles {

/// K_m(x) by adaptive quadrature of the integral representation
/// int_0^inf exp(-x cosh t) cosh(m t) dt. Independent of the production
/// series/continued-fraction/recurrence path.
double bessel_k_quadrature(int m, double x, double rel_tol = 1e-12);

/// Lowest eigenvalue of the finite-difference (lumped-mass P1) Robin interval
/// pencil on (0, width) with n cells, by Sturm bisection on the equivalent
/// symmetric tridiagonal matrix.
double fd_interval_lowest(double width, double sigma0, FarBC far, double sigma_far, int n);

/// Richardson-extrapolated FD value from n and 2n grids (h^2 term removed).
double fd_interval_lowest_rich(double width, double sigma0, FarBC far, double sigma_far,
                               int n);

} // namespace robin::oracles
