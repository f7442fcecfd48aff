#pragma once

#include "robin/eigensolve.hpp"

#include <functional>

namespace robin {

/// One-dimensional problem for the longitudinal comparison operator
/// -d^2/ds^2 - gamma(s)^2/4, either on a truncated line with Dirichlet ends
/// or on a circle of length L with periodic identification.
struct Comparison1DProblem {
    std::function<double(double)> gamma;
    bool periodic = false;
    double extent = 40.0;  // line: s in [-extent, extent]; circle: s in [0, extent]
    int n = 2048;          // grid intervals
};

/// P1 finite element discretization of int |f'|^2 - (1/4) int gamma^2 |f|^2
/// with the stated boundary identification; consistent mass matrix.
SymPencil assemble_comparison(const Comparison1DProblem& problem);

/// General 1D Schrodinger-form assembly used by the separated estimators:
/// kinetic_coeff * int |f'|^2 + int potential |f|^2.
SymPencil assemble_schrodinger_1d(const std::function<double(double)>& potential,
                                  double kinetic_coeff, bool periodic, double lo,
                                  double hi, int n);

/// Ascending comparison eigenvalues. For line geometry, values at or above
/// the essential threshold 0 are reported but flagged non-discrete.
Spectrum mu_eigenvalues(const Comparison1DProblem& problem, int k, double tol = 1e-9);

} // namespace robin
