#include "robin/comparison1d.hpp"

#include "robin/numerics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace robin {

SymPencil assemble_schrodinger_1d(const std::function<double(double)>& potential,
                                  double kinetic_coeff, bool periodic, double lo,
                                  double hi, int n) {
    if (n < 16) throw std::invalid_argument("assemble_schrodinger_1d: n >= 16 required");
    if (!(hi > lo)) throw std::invalid_argument("assemble_schrodinger_1d: empty interval");

    const double h = (hi - lo) / n;
    // Line geometry: Dirichlet ends eliminated, interior nodes 1..n-1.
    // Periodic: nodes 0..n-1 with wraparound.
    const int dofs = periodic ? n : n - 1;
    auto node_dof = [&](int node) -> int {
        if (periodic) return node % n;
        return (node == 0 || node == n) ? -1 : node - 1;
    };

    std::vector<Eigen::Triplet<double>> ta, tb;
    const auto& rule = num::gauss_legendre(4);
    for (int e = 0; e < n; ++e) {
        const double x0 = lo + e * h;
        // Local P1 matrices: exact stiffness, Gauss-4 potential and mass.
        double k00 = kinetic_coeff / h, k11 = kinetic_coeff / h, k01 = -kinetic_coeff / h;
        double m00 = h / 3.0, m11 = h / 3.0, m01 = h / 6.0;
        double v00 = 0, v01 = 0, v11 = 0;
        for (size_t q = 0; q < rule.nodes.size(); ++q) {
            const double t = 0.5 * (rule.nodes[q] + 1.0);  // in [0,1]
            const double w = 0.5 * rule.weights[q] * h;
            const double V = potential(x0 + t * h);
            const double phi0 = 1.0 - t, phi1 = t;
            v00 += w * V * phi0 * phi0;
            v01 += w * V * phi0 * phi1;
            v11 += w * V * phi1 * phi1;
        }
        const int d0 = node_dof(e), d1 = node_dof(e + 1);
        auto add = [&](int r, int c, double a_val, double b_val) {
            if (r < 0 || c < 0) return;
            ta.emplace_back(r, c, a_val);
            tb.emplace_back(r, c, b_val);
        };
        add(d0, d0, k00 + v00, m00);
        add(d1, d1, k11 + v11, m11);
        add(d0, d1, k01 + v01, m01);
        add(d1, d0, k01 + v01, m01);
    }

    SymPencil p;
    p.A.resize(dofs, dofs);
    p.B.resize(dofs, dofs);
    p.A.setFromTriplets(ta.begin(), ta.end());
    p.B.setFromTriplets(tb.begin(), tb.end());
    p.A.makeCompressed();
    p.B.makeCompressed();
    p.provenance = periodic ? "schrodinger1d/periodic" : "schrodinger1d/dirichlet";
    return p;
}

SymPencil assemble_comparison(const Comparison1DProblem& problem) {
    if (problem.extent <= 0)
        throw std::invalid_argument("assemble_comparison: extent must be positive");
    auto gamma = problem.gamma;
    auto potential = [gamma](double s) {
        const double g = gamma(s);
        return -0.25 * g * g;
    };
    const double lo = problem.periodic ? 0.0 : -problem.extent;
    const double hi = problem.periodic ? problem.extent : problem.extent;
    SymPencil p = assemble_schrodinger_1d(potential, 1.0, problem.periodic, lo, hi, problem.n);
    p.provenance = problem.periodic ? "comparison/circle" : "comparison/line";
    return p;
}

Spectrum mu_eigenvalues(const Comparison1DProblem& problem, int k, double tol) {
    if (k < 1) throw std::invalid_argument("mu_eigenvalues: k >= 1 required");
    SymPencil pencil = assemble_comparison(problem);
    SolveOptions opts;
    opts.tol = tol;
    Spectrum spec = lowest_eigenpairs(pencil, k, opts);
    if (!problem.periodic) {
        // Line: essential spectrum starts at 0; anything at or above it is a
        // truncation artifact, not a genuine mu_j.
        spec = classify_discrete(std::move(spec), 0.0, 0.0);
    }
    return spec;
}

} // namespace robin
