#include "support/oracles.hpp"

#include "robin/numerics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace robin::oracles {

double bessel_k_quadrature(int m, double x, double rel_tol) {
    if (x <= 0) throw std::domain_error("bessel_k_quadrature: x must be positive");
    // Truncate where the integrand drops 60+ orders below its peak.
    auto log_integrand = [m, x](double t) { return -x * std::cosh(t) + std::log(std::cosh(m * t) + 1.0); };
    double peak = 0.0;
    if (m > 0 && m / x > 1.0) peak = std::asinh(m / x);
    const double log_peak = log_integrand(peak);
    double upper = peak + 1.0;
    while (log_integrand(upper) > log_peak - 160.0 && upper < 900.0) upper += 1.0;
    auto f = [m, x](double t) { return std::exp(-x * std::cosh(t)) * std::cosh(m * t); };
    const double scale = std::exp(-x);  // integrand at t = 0 for small m
    const double abs_tol = 0.02 * rel_tol * std::max(scale, std::exp(log_peak));
    return num::integrate_adaptive(f, 0.0, upper, abs_tol, 60);
}

namespace {

/// Number of eigenvalues of the symmetric tridiagonal (diag, off) below x,
/// by the standard LDL sign-count recurrence.
int sturm_count(const std::vector<double>& diag, const std::vector<double>& off, double x) {
    int count = 0;
    double q = diag[0] - x;
    if (q < 0) ++count;
    for (size_t i = 1; i < diag.size(); ++i) {
        double denom = q;
        if (denom == 0.0) denom = 1e-300;
        q = diag[i] - x - off[i - 1] * off[i - 1] / denom;
        if (q < 0) ++count;
    }
    return count;
}

} // namespace

double fd_interval_lowest(double width, double sigma0, FarBC far, double sigma_far, int n) {
    // Lumped-mass P1 = second-order finite differences; nodes 0..n, the far
    // node dropped for Dirichlet.
    const double h = width / n;
    const int size = far == FarBC::dirichlet ? n : n + 1;
    std::vector<double> a_diag(size), b_diag(size), off(size - 1);
    for (int i = 0; i < size; ++i) {
        const bool end = i == 0 || i == n;
        a_diag[i] = end ? 1.0 / h : 2.0 / h;
        b_diag[i] = end ? 0.5 * h : h;
    }
    if (far == FarBC::dirichlet) a_diag[n - 1] = 2.0 / h;  // interior node next to the wall
    a_diag[0] -= sigma0;
    if (far == FarBC::robin) a_diag[n] += sigma_far;
    for (int i = 0; i + 1 < size; ++i) off[i] = -1.0 / h;

    // Symmetrize the pencil: D^{-1/2} A D^{-1/2} with D = lumped mass.
    std::vector<double> diag(size), soff(size - 1);
    for (int i = 0; i < size; ++i) diag[i] = a_diag[i] / b_diag[i];
    for (int i = 0; i + 1 < size; ++i)
        soff[i] = off[i] / std::sqrt(b_diag[i] * b_diag[i + 1]);

    double lo = -2.0 * sigma0 * sigma0 - 10.0, hi = 1.0;
    while (sturm_count(diag, soff, lo) > 0) lo *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (sturm_count(diag, soff, mid) >= 1 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

double fd_interval_lowest_rich(double width, double sigma0, FarBC far, double sigma_far,
                               int n) {
    const double coarse = fd_interval_lowest(width, sigma0, far, sigma_far, n);
    const double fine = fd_interval_lowest(width, sigma0, far, sigma_far, 2 * n);
    return (4.0 * fine - coarse) / 3.0;
}

} // namespace robin::oracles
