#include "robin/strip2d.hpp"

#include "robin/comparison1d.hpp"
#include "robin/errors.hpp"
#include "robin/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace robin {

namespace {

std::vector<double> uniform_nodes(double lo, double hi, int n) {
    std::vector<double> nodes(n + 1);
    for (int i = 0; i <= n; ++i) nodes[i] = lo + (hi - lo) * i / n;
    return nodes;
}

/// Nodes on [0, width] clustered at u = 0 (sinh stretch).
std::vector<double> wall_nodes_one_sided(double width, int n, double rho) {
    if (rho <= 0) return uniform_nodes(0, width, n);
    std::vector<double> nodes(n + 1);
    const double denom = std::sinh(rho);
    for (int j = 0; j <= n; ++j) {
        const double t = static_cast<double>(j) / n;
        nodes[j] = width * std::sinh(rho * t) / denom;
    }
    nodes.front() = 0.0;
    nodes.back() = width;
    return nodes;
}

/// Nodes on [0, width] with uniformly resolved boundary layers of thickness
/// ~4/layer_rate at both walls and a uniform middle. 40% of the cells go to
/// each layer.
std::vector<double> wall_nodes_two_sided(double width, int n, double layer_rate) {
    const double layer = layer_rate > 0 ? std::min(4.0 / layer_rate, 0.25 * width) : 0.0;
    const int n_layer = static_cast<int>(std::llround(0.4 * n));
    const int n_mid = n - 2 * n_layer;
    if (layer <= 0.0 || n_layer < 8 || n_mid < 8) return uniform_nodes(0, width, n);
    std::vector<double> nodes;
    nodes.reserve(n + 1);
    for (int j = 0; j < n_layer; ++j) nodes.push_back(layer * j / n_layer);
    for (int j = 0; j < n_mid; ++j)
        nodes.push_back(layer + (width - 2.0 * layer) * j / n_mid);
    for (int j = 0; j <= n_layer; ++j)
        nodes.push_back(width - layer + layer * j / n_layer);
    nodes.front() = 0.0;
    nodes.back() = width;
    return nodes;
}

struct CellKernel {
    // Coefficients at a quadrature point: s-kinetic, u-kinetic, potential, mass.
    double cs, cu, pot, mass;
};

} // namespace

double effective_potential(const BoundaryCurve& curve, double s, double u, TubeSide side) {
    const double g = curve.curvature(s);
    const double g1 = curve.curvature_deriv(s);
    const double g2 = curve.curvature_deriv2(s);
    const double jac = side == TubeSide::interior ? 1.0 - u * g : 1.0 + u * g;
    if (jac <= 1e-12)
        throw SingularCoordinatesError("effective_potential: vanishing Jacobian factor");
    const double j2 = jac * jac;
    const double curv_term = -0.25 * g * g / j2;
    const double bend_term = 0.5 * u * g2 / (j2 * jac);
    const double slope_term = -1.25 * u * u * g1 * g1 / (j2 * j2);
    if (side == TubeSide::interior) return curv_term - bend_term + slope_term;
    return curv_term + bend_term + slope_term;
}

namespace {

/// Shared Q1 tensor assembly. `kernel(s_index_cached_values, u)` supplies the
/// PDE coefficients; boundary coefficient callbacks add the wall terms.
struct StripAssembly {
    const StripModel& model;
    bool periodic;
    std::vector<double> s_nodes, u_nodes;
    int ns_dofs = 0, nu_dofs = 0;

    explicit StripAssembly(const StripModel& m) : model(m) {
        periodic = m.curve.topology() == CurveTopology::closed_loop;
        if (m.n_s < 8 || m.n_u < 8)
            throw std::invalid_argument("assemble_strip: mesh too coarse (min 8x8)");
        if (periodic) {
            s_nodes = uniform_nodes(0.0, m.curve.perimeter(), m.n_s);
        } else {
            s_nodes = uniform_nodes(-m.s_trunc, m.s_trunc, m.n_s);
        }
        const bool two_sided = m.side == StripSide::waveguide;
        u_nodes = two_sided
                      ? wall_nodes_two_sided(m.width, m.n_u,
                                             m.wall_refine > 0 ? m.beta : 0.0)
                      : wall_nodes_one_sided(m.width, m.n_u, m.wall_refine);
    }

    int s_dof(int i) const {
        const int n = model.n_s;
        if (periodic) return i % n;
        return (i == 0 || i == n) ? -1 : i - 1;
    }

    int u_dof(int j, bool drop_far) const {
        if (drop_far && j == model.n_u) return -1;
        return j;
    }

    int dof(int i, int j, bool drop_far) const {
        const int is = s_dof(i), ju = u_dof(j, drop_far);
        if (is < 0 || ju < 0) return -1;
        return ju * ns_dofs + is;
    }
};

SymPencil assemble_generic(
    const StripModel& model,
    const std::function<CellKernel(double g, double g1, double g2, double u)>& kernel,
    const std::function<double(double g)>& wall0_coeff,
    const std::function<double(double g)>& wall_far_coeff,  // empty -> no far term
    bool drop_far, const char* provenance) {
    StripAssembly mesh(model);
    const int n_s = model.n_s, n_u = model.n_u;
    mesh.ns_dofs = mesh.periodic ? n_s : n_s - 1;
    mesh.nu_dofs = drop_far ? n_u : n_u + 1;
    const int dofs = mesh.ns_dofs * mesh.nu_dofs;

    std::vector<Eigen::Triplet<double>> ta, tb;
    ta.reserve(static_cast<size_t>(n_s) * n_u * 16 + 4 * n_s);
    tb.reserve(static_cast<size_t>(n_s) * n_u * 16);

    const auto& rule = num::gauss_legendre(3);
    const int nq = 3;
    double tq[nq], wq[nq];
    for (int q = 0; q < nq; ++q) {
        tq[q] = 0.5 * (rule.nodes[q] + 1.0);
        wq[q] = 0.5 * rule.weights[q];
    }
    // Q1 shape values / reference derivatives at the tensor quadrature grid.
    // Local node order: (i,j), (i+1,j), (i,j+1), (i+1,j+1).
    auto shape = [](int a, double xi, double eta) {
        switch (a) {
            case 0: return (1.0 - xi) * (1.0 - eta);
            case 1: return xi * (1.0 - eta);
            case 2: return (1.0 - xi) * eta;
            default: return xi * eta;
        }
    };
    auto dshape_xi = [](int a, double eta) {
        switch (a) {
            case 0: return -(1.0 - eta);
            case 1: return (1.0 - eta);
            case 2: return -eta;
            default: return eta;
        }
    };
    auto dshape_eta = [](int a, double xi) {
        switch (a) {
            case 0: return -(1.0 - xi);
            case 1: return -xi;
            case 2: return (1.0 - xi);
            default: return xi;
        }
    };

    for (int i = 0; i < n_s; ++i) {
        const double s0 = mesh.s_nodes[i];
        const double hs = mesh.s_nodes[i + 1] - mesh.s_nodes[i];
        double gq[nq], g1q[nq], g2q[nq];
        for (int q = 0; q < nq; ++q) {
            const double s = s0 + tq[q] * hs;
            gq[q] = model.curve.curvature(s);
            g1q[q] = model.curve.curvature_deriv(s);
            g2q[q] = model.curve.curvature_deriv2(s);
        }

        // Wall terms: nodal 1D mass on the bottom (and possibly far) edge.
        const int rows[2] = {0, n_u};
        for (int which = 0; which < 2; ++which) {
            if (which == 1 && !wall_far_coeff) continue;
            const int j = rows[which];
            const int d0 = mesh.dof(i, j, drop_far);
            const int d1 = mesh.dof(i + 1, j, drop_far);
            for (int q = 0; q < nq; ++q) {
                const double c =
                    which == 0 ? wall0_coeff(gq[q]) : wall_far_coeff(gq[q]);
                const double w = wq[q] * hs * c;
                const double p0 = 1.0 - tq[q], p1 = tq[q];
                if (d0 >= 0) ta.emplace_back(d0, d0, w * p0 * p0);
                if (d1 >= 0) ta.emplace_back(d1, d1, w * p1 * p1);
                if (d0 >= 0 && d1 >= 0) {
                    ta.emplace_back(d0, d1, w * p0 * p1);
                    ta.emplace_back(d1, d0, w * p0 * p1);
                }
            }
        }

        for (int j = 0; j < n_u; ++j) {
            const double u0 = mesh.u_nodes[j];
            const double hu = mesh.u_nodes[j + 1] - mesh.u_nodes[j];
            int ldof[4] = {mesh.dof(i, j, drop_far), mesh.dof(i + 1, j, drop_far),
                           mesh.dof(i, j + 1, drop_far), mesh.dof(i + 1, j + 1, drop_far)};
            double A_loc[4][4] = {};
            double B_loc[4][4] = {};
            for (int qs = 0; qs < nq; ++qs) {
                for (int qu = 0; qu < nq; ++qu) {
                    const double u = u0 + tq[qu] * hu;
                    const CellKernel kc = kernel(gq[qs], g1q[qs], g2q[qs], u);
                    const double w = wq[qs] * wq[qu] * hs * hu;
                    for (int a = 0; a < 4; ++a) {
                        const double Na = shape(a, tq[qs], tq[qu]);
                        const double dNa_s = dshape_xi(a, tq[qu]) / hs;
                        const double dNa_u = dshape_eta(a, tq[qs]) / hu;
                        for (int b = a; b < 4; ++b) {
                            const double Nb = shape(b, tq[qs], tq[qu]);
                            const double dNb_s = dshape_xi(b, tq[qu]) / hs;
                            const double dNb_u = dshape_eta(b, tq[qs]) / hu;
                            const double a_val =
                                w * (kc.cs * dNa_s * dNb_s + kc.cu * dNa_u * dNb_u +
                                     kc.pot * Na * Nb);
                            const double b_val = w * kc.mass * Na * Nb;
                            A_loc[a][b] += a_val;
                            B_loc[a][b] += b_val;
                            if (a != b) {
                                A_loc[b][a] += a_val;
                                B_loc[b][a] += b_val;
                            }
                        }
                    }
                }
            }
            for (int a = 0; a < 4; ++a) {
                if (ldof[a] < 0) continue;
                for (int b = 0; b < 4; ++b) {
                    if (ldof[b] < 0) continue;
                    ta.emplace_back(ldof[a], ldof[b], A_loc[a][b]);
                    tb.emplace_back(ldof[a], ldof[b], B_loc[a][b]);
                }
            }
        }
    }

    SymPencil pencil;
    pencil.A.resize(dofs, dofs);
    pencil.B.resize(dofs, dofs);
    pencil.A.setFromTriplets(ta.begin(), ta.end());
    pencil.B.setFromTriplets(tb.begin(), tb.end());
    pencil.A.makeCompressed();
    pencil.B.makeCompressed();
    pencil.provenance = provenance;
    return pencil;
}

void validate_model(const StripModel& model, const CurvatureStats& stats) {
    if (model.width <= 0) throw std::invalid_argument("strip model: width must be positive");
    if (model.beta <= 0) throw std::invalid_argument("strip model: beta must be positive");
    const bool closed = model.curve.topology() == CurveTopology::closed_loop;
    if (model.side == StripSide::obstacle_exterior && !closed)
        throw std::invalid_argument("strip model: exterior side needs a closed curve");
    if (model.side != StripSide::obstacle_exterior && closed)
        throw std::invalid_argument("strip model: interior/waveguide sides need an infinite curve");
    if (model.width * stats.gamma_abs_max >= 1.0)
        throw SingularCoordinatesError("strip model: width * max|gamma| must be < 1");
}

CurvatureStats model_stats(const StripModel& model) {
    const bool closed = model.curve.topology() == CurveTopology::closed_loop;
    const double lo = closed ? 0.0 : -model.s_trunc;
    const double hi = closed ? model.curve.perimeter() : model.s_trunc;
    return curvature_stats(model.curve, lo, hi, 4096);
}

} // namespace

SymPencil assemble_strip(const StripModel& model) {
    const CurvatureStats stats = model_stats(model);
    validate_model(model, stats);
    const double beta = model.beta;
    const double a = model.width;

    switch (model.side) {
        case StripSide::domain_interior: {
            auto kernel = [](double g, double g1, double g2, double u) -> CellKernel {
                const double jac = 1.0 - u * g;
                if (jac <= 1e-12)
                    throw SingularCoordinatesError("assemble_strip: vanishing Jacobian");
                const double j2 = jac * jac;
                const double pot = -0.25 * g * g / j2 - 0.5 * u * g2 / (j2 * jac) -
                                   1.25 * u * u * g1 * g1 / (j2 * j2);
                return {1.0 / j2, 1.0, pot, 1.0};
            };
            auto wall0 = [beta](double g) { return -(0.5 * g + beta); };
            std::function<double(double)> wall_far;
            if (model.far == FarBC::neumann)
                wall_far = [a](double g) { return 0.5 * g / (1.0 - a * g); };
            return assemble_generic(model, kernel, wall0, wall_far,
                                    model.far == FarBC::dirichlet, "strip2d/interior");
        }
        case StripSide::obstacle_exterior: {
            auto kernel = [](double g, double g1, double g2, double u) -> CellKernel {
                const double jac = 1.0 + u * g;
                if (jac <= 1e-12)
                    throw SingularCoordinatesError("assemble_strip: vanishing Jacobian");
                const double j2 = jac * jac;
                const double pot = -0.25 * g * g / j2 + 0.5 * u * g2 / (j2 * jac) -
                                   1.25 * u * u * g1 * g1 / (j2 * j2);
                return {1.0 / j2, 1.0, pot, 1.0};
            };
            auto wall0 = [beta](double g) { return -(beta - 0.5 * g); };
            std::function<double(double)> wall_far;
            if (model.far == FarBC::neumann)
                wall_far = [a](double g) { return -0.5 * g / (1.0 + a * g); };
            return assemble_generic(model, kernel, wall0, wall_far,
                                    model.far == FarBC::dirichlet, "strip2d/exterior");
        }
        case StripSide::waveguide: {
            auto kernel = [](double g, double g1, double g2, double u) -> CellKernel {
                const double jac = 1.0 - u * g;
                if (jac <= 1e-12)
                    throw SingularCoordinatesError("assemble_strip: vanishing Jacobian");
                const double j2 = jac * jac;
                const double pot = -0.25 * g * g / j2 - 0.5 * u * g2 / (j2 * jac) -
                                   1.25 * u * u * g1 * g1 / (j2 * j2);
                return {1.0 / j2, 1.0, pot, 1.0};
            };
            auto wall0 = [beta](double g) { return -(0.5 * g + beta); };
            // Second wall: boundary term of the straightening plus the Robin
            // attraction carried through the arc-length element (1 - d*gamma).
            auto wall_far = [a, beta](double g) { return 0.5 * g / (1.0 - a * g) - beta; };
            return assemble_generic(model, kernel, wall0, wall_far, false, "strip2d/waveguide");
        }
    }
    throw std::logic_error("assemble_strip: unreachable");
}

double strip_threshold(const StripModel& model) {
    switch (model.side) {
        case StripSide::domain_interior: return -model.beta * model.beta;
        case StripSide::obstacle_exterior: return 0.0;
        case StripSide::waveguide: {
            const double kappa = waveguide_decay_rate(model.width, model.beta);
            return -kappa * kappa;
        }
    }
    throw std::logic_error("strip_threshold: unreachable");
}

Spectrum solve_strip(const StripModel& model, int k, double tol, unsigned long seed) {
    const CurvatureStats stats = model_stats(model);
    SolveOptions opts;
    opts.tol = tol;
    opts.seed = seed;
    // The ground state sits near -(beta + gamma_max/2)^2; start the shift a
    // safe factor below so the first factorization already certifies it.
    const double depth = model.beta + 0.5 * std::max(0.0, stats.gamma_max);
    opts.shift_hint = -1.3 * depth * depth - 0.5 * stats.gamma_abs_max * stats.gamma_abs_max - 5.0;
    return lowest_eigenpairs(assemble_strip(model), k, opts);
}

double default_discreteness_margin(double beta) {
    if (beta <= 1.0) return 0.0;
    return 2.0 * std::log(beta) / beta;
}

SeparatedBounds separated_bounds(const StripModel& model, int k) {
    if (model.side == StripSide::waveguide)
        throw std::invalid_argument("separated_bounds: not defined for waveguides");
    const CurvatureStats stats = model_stats(model);
    validate_model(model, stats);
    const double a = model.width;
    const double gp = stats.gamma_abs_max;
    if (gp > 0 && !(a < 0.5 / gp))
        throw RegimeError("separated_bounds: requires width < 1/(2 max|gamma|)");

    const double g1p = stats.gamma_deriv_abs_max;
    const double g2p = stats.gamma_deriv2_abs_max;
    const double shrink = 1.0 - a * gp;
    const double grow = 1.0 + a * gp;
    const double bend = 0.5 * a * g2p / (shrink * shrink * shrink);
    const double slope = 1.25 * a * a * g1p * g1p / (shrink * shrink * shrink * shrink);

    auto gamma = [curve = model.curve](double s) { return curve.curvature(s); };
    auto v_plus = [gamma, grow, bend](double s) {
        const double g = gamma(s);
        return -0.25 * g * g / (grow * grow) + bend;
    };
    auto v_minus = [gamma, shrink, bend, slope](double s) {
        const double g = gamma(s);
        return -0.25 * g * g / (shrink * shrink) - bend - slope;
    };

    const bool periodic = model.curve.topology() == CurveTopology::closed_loop;
    const double lo = periodic ? 0.0 : -std::max(model.s_trunc, 40.0);
    const double hi = periodic ? model.curve.perimeter() : std::max(model.s_trunc, 40.0);
    const int n1d = std::max(model.n_s, periodic ? 1024 : 2048);

    SolveOptions long_opts;
    long_opts.tol = 1e-9;
    SymPencil UD = assemble_schrodinger_1d(v_plus, 1.0 / (shrink * shrink), periodic, lo, hi, n1d);
    SymPencil UN = assemble_schrodinger_1d(v_minus, 1.0 / (grow * grow), periodic, lo, hi, n1d);
    Spectrum mu_d = lowest_eigenpairs(UD, k, long_opts);
    Spectrum mu_n = lowest_eigenpairs(UN, k, long_opts);

    SeparatedBounds out;
    out.mu_dirichlet = mu_d.values;
    out.mu_neumann = mu_n.values;
    if (model.side == StripSide::domain_interior) {
        out.sigma_dirichlet = model.beta + 0.5 * stats.gamma_min;
        out.sigma_neumann = model.beta + 0.5 * stats.gamma_max;
        const double sig_far = 0.5 * stats.gamma_min / (1.0 - a * stats.gamma_min);
        out.zeta_dirichlet = dirichlet_far_ground(a, out.sigma_dirichlet);
        out.zeta_neumann = robin_far_ground(a, out.sigma_neumann, sig_far);
    } else {
        out.sigma_dirichlet = model.beta - 0.5 * stats.gamma_max;
        out.sigma_neumann = model.beta - 0.5 * stats.gamma_min;
        const double sig_far = -0.5 * gp / (1.0 - a * gp);
        out.zeta_dirichlet = dirichlet_far_ground(a, out.sigma_dirichlet);
        out.zeta_neumann = robin_far_ground(a, out.sigma_neumann, sig_far);
    }
    for (int j = 0; j < k; ++j) {
        out.upper.push_back(out.mu_dirichlet[j] + out.zeta_dirichlet);
        out.lower.push_back(out.mu_neumann[j] + out.zeta_neumann);
    }
    return out;
}

BracketResult bracket_eigenvalues(const StripModel& model, int k, double tol) {
    if (model.side == StripSide::waveguide)
        throw std::invalid_argument("bracket_eigenvalues: waveguides have Robin walls on "
                                    "both sides; use assemble_strip directly");
    StripModel lower_model = model;
    lower_model.far = FarBC::neumann;
    StripModel upper_model = model;
    upper_model.far = FarBC::dirichlet;

    Spectrum low = solve_strip(lower_model, k, tol);
    Spectrum up = solve_strip(upper_model, k, tol);

    BracketResult out;
    out.lower = low.values;
    out.upper = up.values;
    out.lower_residuals = low.residuals;
    out.upper_residuals = up.residuals;

    // Comparison eigenvalues and the refined lower-bound prediction.
    const CurvatureStats stats = model_stats(model);
    Comparison1DProblem cmp;
    cmp.gamma = [curve = model.curve](double s) { return curve.curvature(s); };
    cmp.periodic = model.curve.topology() == CurveTopology::closed_loop;
    cmp.extent = cmp.periodic ? model.curve.perimeter() : std::max(model.s_trunc, 40.0);
    cmp.n = cmp.periodic ? 1024 : 2048;
    Spectrum mu = mu_eigenvalues(cmp, k);
    out.mu = mu.values;
    const double sigma = model.side == StripSide::domain_interior
                             ? model.beta + 0.5 * stats.gamma_max
                             : model.beta - 0.5 * stats.gamma_min;
    for (int j = 0; j < k; ++j)
        out.refined_lower.push_back(-sigma * sigma + out.mu[j]);

    try {
        out.separated = separated_bounds(model, k);
        out.separated_available = true;
        out.lower_slack = out.lower[0] - out.separated.lower[0];
        out.refined_gap = out.refined_lower[0] - out.separated.lower[0];
    } catch (const RegimeError&) {
        out.separated_available = false;
    }
    return out;
}

ConcavityReport concavity_check(const StripModel& model, double tol, bool allow_convex) {
    if (model.side != StripSide::domain_interior)
        throw std::invalid_argument("concavity_check: interior side only");
    const CurvatureStats stats = model_stats(model);
    if (stats.gamma_max > 1e-10 && !allow_convex)
        throw RegimeError("concavity_check: positive curvature detected");
    if (model.width <= 0) throw std::invalid_argument("concavity_check: width must be positive");

    // Weighted measure (1 - u*gamma) ds du: no effective potential, the
    // curvature enters only through the metric coefficients.
    auto kernel = [](double g, double, double, double u) -> CellKernel {
        const double jac = 1.0 - u * g;
        if (jac <= 1e-12)
            throw SingularCoordinatesError("concavity_check: vanishing weight");
        return {1.0 / jac, jac, 0.0, jac};
    };
    const double beta = model.beta;
    auto wall0 = [beta](double) { return -beta; };
    // Neumann truncation at u = width: lowers the spectrum, so a pass is the
    // conservative outcome.
    SymPencil pencil = assemble_generic(model, kernel, wall0, nullptr, false,
                                        "strip2d/concavity-weighted");
    SolveOptions opts;
    opts.tol = 1e-8;
    opts.shift_hint = -2.5 * beta * beta - 5.0;
    Spectrum spec = lowest_eigenpairs(pencil, 1, opts);
    ConcavityReport rep;
    rep.lowest = spec.values[0];
    rep.threshold = -beta * beta;
    rep.empty_discrete = rep.lowest >= rep.threshold * (1.0 + tol);
    return rep;
}

} // namespace robin
