#pragma once

#include "robin/eigensolve.hpp"

namespace robin {

enum class FarBC { dirichlet, neumann, robin };

/// 1D Robin interval problem on (0, width): form
///   int |phi'|^2 - robin0 |phi(0)|^2 [+ robin_far |phi(width)|^2],
/// with the far end Dirichlet, Neumann, or Robin.
struct TransverseProblem {
    double width = 1.0;
    double robin0 = 1.0;      // attraction strength at u = 0
    FarBC far = FarBC::dirichlet;
    double robin_far = 0.0;   // coefficient of |phi(width)|^2 when far == robin
};

/// Unique negative eigenvalue of the Robin-Dirichlet interval problem:
/// solves kappa*coth(kappa*a) = sigma0 and returns -kappa^2.
/// Requires a*sigma0 > 4/3 (uniqueness regime).
double dirichlet_far_ground(double width, double sigma0);

/// Unique negative eigenvalue with a Robin far end carrying coefficient
/// sigma_far (sigma_far = 0 is the Neumann case). Requires
/// sigma0 > max(|sigma_far|, 2*log(5)/(3*width)).
double robin_far_ground(double width, double sigma0, double sigma_far);

/// Decay rate zeta > beta of the Robin-Neumann interval (0, width):
/// root of (zeta - beta)/(zeta + beta) = exp(-2*zeta*width); the spectral
/// threshold of that problem is -zeta^2.
double robin_neumann_decay_rate(double width, double beta);

/// Even-mode decay rate kappa of the straight Robin strip of width d:
/// kappa * tanh(kappa d / 2) = beta; the strip threshold is -kappa^2.
double waveguide_decay_rate(double width, double beta);

/// P1 discretization of the transverse form; boundary terms are nodal.
SymPencil assemble_transverse(const TransverseProblem& problem, int n);

} // namespace robin
