#pragma once

#include "robin/eigensolve.hpp"
#include "robin/geometry.hpp"
#include "robin/transverse1d.hpp"

#include <vector>

namespace robin {

enum class StripSide { domain_interior, obstacle_exterior, waveguide };

/// Straightened strip model in curvilinear coordinates (s, u):
///  - domain_interior: one-sided strip of width `width` inside the domain,
///    Robin wall at u = 0, artificial far wall at u = width;
///  - obstacle_exterior: same on the outside of a closed curve;
///  - waveguide: full duct of width `width` with Robin walls on both sides
///    (`far` is ignored).
struct StripModel {
    BoundaryCurve curve;
    StripSide side = StripSide::domain_interior;
    double width = 0.5;
    double beta = 1.0;
    FarBC far = FarBC::dirichlet;
    double s_trunc = 16.0;     // longitudinal half-window for infinite curves
    int n_s = 256;
    int n_u = 64;
    double wall_refine = 3.0;  // sinh mesh grading toward Robin walls (0 = uniform)
};

/// Three-term effective potential of the straightening transformation.
double effective_potential(const BoundaryCurve& curve, double s, double u, TubeSide side);

/// Conforming bilinear discretization of the straightened quadratic form.
SymPencil assemble_strip(const StripModel& model);

/// Essential-spectrum reference for the model: -beta^2 (interior), 0
/// (exterior), -kappa^2 with kappa tanh(kappa d/2) = beta (waveguide).
double strip_threshold(const StripModel& model);

/// Assembles and solves for the k lowest eigenpairs, seeding the spectral
/// shift from the known depth scale of the model.
Spectrum solve_strip(const StripModel& model, int k, double tol = 1e-8,
                     unsigned long seed = 0);

/// Discreteness margin matching the truncated-strip threshold resolution:
/// 2 log(beta)/beta in absolute energy units.
double default_discreteness_margin(double beta);

struct SeparatedBounds {
    std::vector<double> lower;         // mu_j^N(a) + zeta^N
    std::vector<double> upper;         // mu_j^D(a) + zeta^D
    std::vector<double> mu_dirichlet;  // eigenvalues of U_a^D
    std::vector<double> mu_neumann;    // eigenvalues of U_a^N
    double zeta_dirichlet = 0;
    double zeta_neumann = 0;
    double sigma_dirichlet = 0;        // Robin strength entering zeta^D
    double sigma_neumann = 0;
};

/// Separated-variable two-sided estimates from the tensor operators
/// U_a^{D/N} x I + I x T_{a,beta}^{D/N}. Requires width < 1/(2 max|gamma|).
SeparatedBounds separated_bounds(const StripModel& model, int k);

struct BracketResult {
    std::vector<double> lower;  // Neumann-far eigenvalues
    std::vector<double> upper;  // Dirichlet-far eigenvalues
    std::vector<double> lower_residuals, upper_residuals;
    std::vector<double> mu;             // comparison eigenvalues mu_j
    std::vector<double> refined_lower;  // -(beta +/- gamma_ext/2)^2 + mu_j
    bool separated_available = false;
    SeparatedBounds separated;
    double lower_slack = 0;   // lower[0] - separated.lower[0]  (reported tolerance)
    double refined_gap = 0;   // refined_lower[0] - separated.lower[0]
};

/// Two-sided eigenvalue enclosures from Dirichlet/Neumann far walls on the
/// same mesh (nested discrete spaces, so the ordering is exact).
BracketResult bracket_eigenvalues(const StripModel& model, int k, double tol = 1e-8);

struct ConcavityReport {
    bool empty_discrete = false;  // lowest >= -beta^2 (1 + tol)
    double lowest = 0;
    double threshold = 0;
};

/// Weighted-measure check for concave boundaries (gamma <= 0): assembles the
/// form with weight (1 - u*gamma) on u in (0, width) and tests whether the
/// lowest eigenvalue stays above -beta^2(1 + tol). Positive curvature is a
/// precondition error unless allow_convex is set.
ConcavityReport concavity_check(const StripModel& model, double tol = 1e-2,
                                bool allow_convex = false);

} // namespace robin
