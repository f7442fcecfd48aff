#pragma once

#include <functional>
#include <span>
#include <vector>

namespace robin::num {

using Fn = std::function<double(double)>;

/// Gauss-Legendre rule on [-1,1]; nodes/weights computed once per order and
/// cached (thread-safe initialization, orders up to 64).
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

/// Fixed-order Gauss quadrature of f over [a,b].
double integrate_gauss(const Fn& f, double a, double b, int order = 16);

/// Composite Gauss quadrature with `panels` equal subintervals.
double integrate_panels(const Fn& f, double a, double b, int panels, int order = 16);

/// Adaptive Simpson to absolute tolerance. Throws std::runtime_error on
/// non-finite integrand values.
double integrate_adaptive(const Fn& f, double a, double b, double abs_tol,
                          int max_depth = 48);

/// Golden-section search for the maximum of a unimodal f on [lo,hi].
/// Returns the abscissa; the caller re-evaluates f if the value is needed.
double golden_section_max(const Fn& f, double lo, double hi, double xtol = 1e-12);

/// Bisection for a root of f on [lo,hi]; requires a sign change.
double bisect(const Fn& f, double lo, double hi, double xtol = 1e-13,
              int max_iter = 200);

/// Expands `hi` geometrically until f changes sign relative to f(lo), then
/// bisects. `hi` is the initial guess for the upper end.
double bisect_expanding(const Fn& f, double lo, double hi, double xtol = 1e-13);

struct LineFit {
    double slope = 0;
    double intercept = 0;
    double r_squared = 0;
};

/// Least-squares straight line through (x_i, y_i).
LineFit fit_line(std::span<const double> x, std::span<const double> y);

} // namespace robin::num
