#include "robin/variational.hpp"

#include "robin/errors.hpp"
#include "robin/numerics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace robin {

double trial_bump(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return std::exp(-1.0 / (x * (1.0 - x)));
}

double trial_bump_deriv(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double p = x * (1.0 - x);
    return trial_bump(x) * (1.0 - 2.0 * x) / (p * p);
}

std::pair<double, double> trial_support(const TrialSpec& spec) {
    const double left = spec.peak - (2.0 * spec.index - 1.0) * spec.bump_halfwidth;
    return {left, left + 2.0 * spec.bump_halfwidth};
}

double trial_longitudinal(const TrialSpec& spec, double s) {
    const auto [left, right] = trial_support(spec);
    (void)right;
    return trial_bump((s - left) / (2.0 * spec.bump_halfwidth));
}

double trial_longitudinal_deriv(const TrialSpec& spec, double s) {
    const auto [left, right] = trial_support(spec);
    (void)right;
    return trial_bump_deriv((s - left) / (2.0 * spec.bump_halfwidth)) /
           (2.0 * spec.bump_halfwidth);
}

TrialSpec default_trial(const StripModel& model, int index) {
    const bool closed = model.curve.topology() == CurveTopology::closed_loop;
    const double lo = closed ? 0.0 : -model.s_trunc;
    const double hi = closed ? model.curve.perimeter() : model.s_trunc;
    const CurvatureStats stats = curvature_stats(model.curve, lo, hi, 4096);
    TrialSpec spec;
    spec.index = index;
    spec.bump_halfwidth = std::pow(model.beta, -1.0 / 3.0);
    if (model.side == StripSide::obstacle_exterior) {
        spec.decay_rate = model.beta - 0.5 * stats.gamma_min;
        // peak at the curvature minimum
        auto neg = [&](double s) { return -model.curve.curvature(s); };
        spec.peak = num::golden_section_max(neg, lo, hi);
    } else {
        spec.decay_rate = model.beta + 0.5 * stats.gamma_max;
        spec.peak = stats.s_at_max;
    }
    return spec;
}

TrialBound trial_rayleigh_bound(const StripModel& model, const TrialSpec& spec) {
    if (model.side == StripSide::waveguide)
        throw std::invalid_argument("trial_rayleigh_bound: interior/exterior sides only");
    if (spec.index < 1 || spec.bump_halfwidth <= 0 || spec.decay_rate <= 0)
        throw std::invalid_argument("trial_rayleigh_bound: invalid trial parameters");
    const bool closed = model.curve.topology() == CurveTopology::closed_loop;
    const auto [s_left, s_right] = trial_support(spec);
    if (closed) {
        if (s_right - s_left >= model.curve.perimeter())
            throw std::invalid_argument("trial_rayleigh_bound: support exceeds the perimeter");
    } else if (s_left < -model.s_trunc || s_right > model.s_trunc) {
        throw std::invalid_argument("trial_rayleigh_bound: support outside the truncation window");
    }

    const CurvatureStats stats = curvature_stats(
        model.curve, closed ? 0.0 : -model.s_trunc,
        closed ? model.curve.perimeter() : model.s_trunc, 2048);
    if (model.width * stats.gamma_abs_max >= 1.0)
        throw SingularCoordinatesError("trial_rayleigh_bound: width * max|gamma| must be < 1");

    const double a = model.width;
    const double alpha = spec.decay_rate;
    const double beta = model.beta;
    const bool interior = model.side == StripSide::domain_interior;
    const TubeSide tube = interior ? TubeSide::interior : TubeSide::exterior;

    auto g = [a, alpha](double u) {
        return std::exp(-alpha * u) - std::exp(-2.0 * a * alpha + u * alpha);
    };
    auto g_deriv = [a, alpha](double u) {
        return -alpha * std::exp(-alpha * u) + alpha * std::exp(-2.0 * a * alpha + u * alpha);
    };

    const double quad_tol = 1e-10;
    auto inner_u = [&](const std::function<double(double)>& f) {
        return num::integrate_adaptive(f, 0.0, a, quad_tol);
    };

    TrialBound out;
    // Longitudinal kinetic term with the anisotropic coefficient.
    out.kinetic_s = num::integrate_adaptive(
        [&](double s) {
            const double chi_d = trial_longitudinal_deriv(spec, s);
            if (chi_d == 0.0) return 0.0;
            const double gamma = model.curve.curvature(s);
            return chi_d * chi_d * inner_u([&](double u) {
                const double jac = interior ? 1.0 - u * gamma : 1.0 + u * gamma;
                const double gu = g(u);
                return gu * gu / (jac * jac);
            });
        },
        s_left, s_right, quad_tol);

    const double chi_sq = num::integrate_adaptive(
        [&](double s) {
            const double c = trial_longitudinal(spec, s);
            return c * c;
        },
        s_left, s_right, quad_tol);

    out.kinetic_u = chi_sq * inner_u([&](double u) {
        const double gd = g_deriv(u);
        return gd * gd;
    });

    out.potential = num::integrate_adaptive(
        [&](double s) {
            const double c = trial_longitudinal(spec, s);
            if (c == 0.0) return 0.0;
            return c * c * inner_u([&](double u) {
                const double gu = g(u);
                return effective_potential(model.curve, s, u, tube) * gu * gu;
            });
        },
        s_left, s_right, quad_tol);

    const double g0 = g(0.0);
    out.boundary = -num::integrate_adaptive(
        [&](double s) {
            const double c = trial_longitudinal(spec, s);
            const double gamma = model.curve.curvature(s);
            const double w0 = interior ? 0.5 * gamma + beta : beta - 0.5 * gamma;
            return w0 * c * c;
        },
        s_left, s_right, quad_tol) * g0 * g0;

    out.norm_sq = chi_sq * inner_u([&](double u) {
        const double gu = g(u);
        return gu * gu;
    });

    out.value = (out.kinetic_s + out.kinetic_u + out.potential + out.boundary) / out.norm_sq;
    return out;
}

// ---- existence functional ----------------------------------------------------

double plateau(double x) {
    auto q = [](double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; };
    const double ax = std::abs(x);
    const double a = q(2.0 - ax), b = q(ax - 1.0);
    if (a == 0.0) return 0.0;
    return a / (a + b);
}

double plateau_deriv(double x) {
    auto q = [](double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; };
    auto qd = [](double t) { return t > 0 ? std::exp(-1.0 / t) / (t * t) : 0.0; };
    const double ax = std::abs(x);
    if (ax <= 1.0 || ax >= 2.0) return 0.0;
    const double sign = x > 0 ? 1.0 : -1.0;
    const double a = q(2.0 - ax), b = q(ax - 1.0);
    const double denom = (a + b) * (a + b);
    return -sign * (qd(2.0 - ax) * b + qd(ax - 1.0) * a) / denom;
}

DeformationResult deformation_functional(const BoundaryCurve& curve, double beta,
                                         int scale, double rate) {
    if (beta <= 0) throw std::invalid_argument("deformation_functional: beta must be positive");
    if (scale < 1) throw std::invalid_argument("deformation_functional: scale must be >= 1");
    if (curve.topology() != CurveTopology::infinite_line)
        throw std::invalid_argument("deformation_functional: infinite boundary curves only");
    if (rate == 0.0) rate = beta;
    if (rate <= 0) throw std::invalid_argument("deformation_functional: rate must be positive");

    const double W = curve.window();

    // Limit integral along the boundary, straight tails in closed form.
    // Composite panels rather than adaptive refinement: the integrand is
    // concentrated near the deformation and vanishes at symmetric sample
    // points, which defeats the adaptive rule's initial probe.
    auto limit_integrand = [&](double s) {
        const double t1 = curve.tangent(s).x;
        const double y = curve.point(s).y;
        return ((beta * beta + rate * rate) / (2.0 * rate) * t1 - beta) *
               std::exp(-2.0 * rate * y);
    };
    DeformationResult out;
    out.limit = num::integrate_panels(limit_integrand, -W, W,
                                      std::max(64, static_cast<int>(4.0 * W)), 16);
    for (int end = 0; end < 2; ++end) {
        const double s_edge = end == 0 ? -W : W;
        const double theta = curve.tangent_angle(s_edge);
        const double slope = std::sin(end == 0 ? -theta : theta);  // outward growth of y
        const double coeff =
            (beta * beta + rate * rate) / (2.0 * rate) * std::cos(theta) - beta;
        if (std::abs(slope) < 1e-12) {
            if (std::abs(coeff) > 1e-12 * beta)
                throw std::invalid_argument(
                    "deformation_functional: flat tails require rate == beta");
            continue;  // integrand vanishes identically on the tail
        }
        if (slope < 0)
            throw std::invalid_argument(
                "deformation_functional: boundary height must grow along the tails");
        out.limit += coeff * std::exp(-2.0 * rate * curve.point(s_edge).y) /
                     (2.0 * rate * slope);
    }

    if (!curve.is_graph()) {
        out.functional_available = false;
        out.functional_value = std::numeric_limits<double>::quiet_NaN();
        out.gradient_term = std::numeric_limits<double>::quiet_NaN();
        return out;
    }

    // Tensor quadrature of S[f_n] over Omega intersected with the support.
    const double n = scale;
    const double y_span = 24.0 / rate;
    auto y_integral = [&](double h, const std::function<double(double)>& f) {
        return num::integrate_panels(f, h, h + y_span, 32, 12);
    };
    auto area_term = [&](double x) {
        const double h = curve.graph_height(x);
        const double psi = plateau(x / n);
        const double dpsi = plateau_deriv(x / n) / n;
        if (psi == 0.0 && dpsi == 0.0) return 0.0;
        return y_integral(h, [&](double y) {
            const double e = std::exp(-2.0 * rate * y);
            return (dpsi * dpsi + (rate * rate + beta * beta) * psi * psi) * e;
        });
    };
    auto boundary_term = [&](double x) {
        const double h = curve.graph_height(x);
        const double hp = curve.graph_slope(x);
        const double psi = plateau(x / n);
        if (psi == 0.0) return 0.0;
        return beta * psi * psi * std::exp(-2.0 * rate * h) * std::sqrt(1.0 + hp * hp);
    };
    const double span = 2.0 * n;
    const int panels = std::max(64, static_cast<int>(2.0 * span));
    const double s_area = num::integrate_panels(area_term, -span, span, panels, 12);
    const double s_bnd = num::integrate_panels(boundary_term, -span, span, panels, 12);
    out.gradient_term = num::integrate_panels(
        [&](double x) {
            const double dpsi = plateau_deriv(x / n) / n;
            if (dpsi == 0.0) return 0.0;
            const double h = curve.graph_height(x);
            return y_integral(h, [&](double y) {
                return dpsi * dpsi * std::exp(-2.0 * rate * y);
            });
        },
        -span, span, panels, 12);
    out.functional_value = s_area - s_bnd;
    out.functional_available = true;
    return out;
}

} // namespace robin
