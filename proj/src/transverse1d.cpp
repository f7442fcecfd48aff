#include "robin/transverse1d.hpp"

#include "robin/errors.hpp"
#include "robin/numerics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace robin {

double dirichlet_far_ground(double width, double sigma0) {
    if (width <= 0 || sigma0 <= 0)
        throw std::invalid_argument("dirichlet_far_ground: width and sigma0 must be positive");
    if (!(width * sigma0 > 4.0 / 3.0))
        throw RegimeError("dirichlet_far_ground: requires width*sigma0 > 4/3");
    // kappa*coth(kappa*width) = sigma0, written as kappa - sigma0*tanh(kappa*width)
    // which is negative on (0, root) and positive beyond.
    auto f = [width, sigma0](double kappa) {
        return kappa - sigma0 * std::tanh(kappa * width);
    };
    const double lo = 1e-8 * std::min(sigma0, 1.0 / width);
    const double kappa = num::bisect(f, lo, sigma0, 1e-14);
    return -kappa * kappa;
}

double robin_far_ground(double width, double sigma0, double sigma_far) {
    if (width <= 0) throw std::invalid_argument("robin_far_ground: width must be positive");
    const double floor = std::max(std::abs(sigma_far), 2.0 * std::log(5.0) / (3.0 * width));
    if (!(sigma0 > floor))
        throw RegimeError("robin_far_ground: requires sigma0 > max(|sigma_far|, 2 log5 / 3 width)");
    // Eigenfunction cosh(kappa u) - (sigma0/kappa) sinh(kappa u); matching the
    // far Robin condition gives
    //   (kappa^2 - sigma0 sigma_far) tanh(kappa width) + kappa (sigma_far - sigma0) = 0
    // with a unique root at kappa >= sigma0.
    auto f = [width, sigma0, sigma_far](double kappa) {
        return (kappa * kappa - sigma0 * sigma_far) * std::tanh(kappa * width) +
               kappa * (sigma_far - sigma0);
    };
    const double kappa = num::bisect_expanding(f, sigma0, 2.0 * sigma0 + 1.0, 1e-14);
    return -kappa * kappa;
}

double robin_neumann_decay_rate(double width, double beta) {
    if (width <= 0 || beta <= 0)
        throw std::invalid_argument("robin_neumann_decay_rate: width and beta must be positive");
    auto f = [width, beta](double zeta) {
        return (zeta - beta) / (zeta + beta) - std::exp(-2.0 * zeta * width);
    };
    return num::bisect_expanding(f, beta, 2.0 * beta, 1e-15);
}

double waveguide_decay_rate(double width, double beta) {
    if (width <= 0 || beta <= 0)
        throw std::invalid_argument("waveguide_decay_rate: width and beta must be positive");
    auto f = [width, beta](double kappa) {
        return kappa * std::tanh(0.5 * kappa * width) - beta;
    };
    return num::bisect_expanding(f, beta, 2.0 * beta + 1.0, 1e-15);
}

SymPencil assemble_transverse(const TransverseProblem& problem, int n) {
    if (n < 16) throw std::invalid_argument("assemble_transverse: n >= 16 required");
    if (problem.width <= 0)
        throw std::invalid_argument("assemble_transverse: width must be positive");
    const double h = problem.width / n;
    const bool drop_far = problem.far == FarBC::dirichlet;
    const int dofs = drop_far ? n : n + 1;

    std::vector<Eigen::Triplet<double>> ta, tb;
    auto dof = [&](int node) -> int {
        if (drop_far && node == n) return -1;
        return node;
    };
    for (int e = 0; e < n; ++e) {
        const int d0 = dof(e), d1 = dof(e + 1);
        auto add = [&](int r, int c, double a_val, double b_val) {
            if (r < 0 || c < 0) return;
            ta.emplace_back(r, c, a_val);
            tb.emplace_back(r, c, b_val);
        };
        add(d0, d0, 1.0 / h, h / 3.0);
        add(d1, d1, 1.0 / h, h / 3.0);
        add(d0, d1, -1.0 / h, h / 6.0);
        add(d1, d0, -1.0 / h, h / 6.0);
    }
    ta.emplace_back(0, 0, -problem.robin0);
    if (problem.far == FarBC::robin) ta.emplace_back(n, n, problem.robin_far);

    SymPencil p;
    p.A.resize(dofs, dofs);
    p.B.resize(dofs, dofs);
    p.A.setFromTriplets(ta.begin(), ta.end());
    p.B.setFromTriplets(tb.begin(), tb.end());
    p.A.makeCompressed();
    p.B.makeCompressed();
    p.provenance = "transverse1d";
    return p;
}

} // namespace robin
