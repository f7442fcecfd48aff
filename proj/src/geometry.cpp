#include "robin/geometry.hpp"

#include "robin/errors.hpp"
#include "robin/numerics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace robin {

namespace {

constexpr double pi = std::numbers::pi;

double sech(double s) { return 1.0 / std::cosh(s); }

/// Cumulative integral F(s) = F(s0) + int_{s0}^{s} f, evaluated through a
/// table of anchors so each call integrates over at most one anchor step.
class CumulativeIntegral {
public:
    CumulativeIntegral() = default;
    CumulativeIntegral(std::function<double(double)> f, double lo, double hi,
                       double anchor_at, double anchor_value, double step = 0.25)
        : f_(std::move(f)), lo_(lo), step_(step) {
        const int n = std::max(2, static_cast<int>(std::ceil((hi - lo) / step_)) + 1);
        step_ = (hi - lo) / (n - 1);
        values_.resize(n);
        values_[0] = 0.0;
        for (int k = 1; k < n; ++k)
            values_[k] = values_[k - 1] +
                         num::integrate_gauss(f_, lo_ + (k - 1) * step_, lo_ + k * step_, 16);
        const double at_anchor = eval_raw(anchor_at);
        offset_ = anchor_value - at_anchor;
    }

    double operator()(double s) const { return eval_raw(s) + offset_; }

private:
    double eval_raw(double s) const {
        int k = static_cast<int>(std::floor((s - lo_) / step_));
        k = std::clamp(k, 0, static_cast<int>(values_.size()) - 1);
        const double sk = lo_ + k * step_;
        return values_[k] + num::integrate_gauss(f_, sk, s, 16);
    }

    std::function<double(double)> f_;
    double lo_ = 0, step_ = 1, offset_ = 0;
    std::vector<double> values_;
};

} // namespace

struct BoundaryCurve::Impl {
    CurveFamily family = CurveFamily::line;
    CurveTopology topology = CurveTopology::infinite_line;
    double perimeter = 0;
    double window = 0;
    std::string descriptor;

    std::function<Vec2(double)> point;
    std::function<double(double)> theta;  // tangent angle
    std::function<double(double)> gamma, dgamma, d2gamma;

    bool graph = false;
    std::function<double(double)> height, slope;
    std::optional<double> wedge_half_angle;
};

namespace {

using Impl = BoundaryCurve::Impl;

/// Maps the evaluation parameter into the admissible range: closed loops
/// wrap; infinite curves allow the window plus a tangent-ray extension.
double clamp_param(const Impl& impl, double s) {
    if (impl.topology == CurveTopology::closed_loop) {
        const double L = impl.perimeter;
        s = std::fmod(s, L);
        if (s < 0) s += L;
        return s;
    }
    const double hard = 4.0 * impl.window;
    if (std::abs(s) > hard)
        throw std::domain_error("BoundaryCurve: parameter far outside the truncation window");
    return s;
}

bool on_ray(const Impl& impl, double s) {
    return impl.topology == CurveTopology::infinite_line && std::abs(s) > impl.window;
}

} // namespace

BoundaryCurve::BoundaryCurve(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

Vec2 BoundaryCurve::point(double s) const {
    const double t = clamp_param(*impl_, s);
    if (on_ray(*impl_, t)) {
        const double edge = std::copysign(impl_->window, t);
        const Vec2 p = impl_->point(edge);
        const double th = impl_->theta(edge);
        return {p.x + (t - edge) * std::cos(th), p.y + (t - edge) * std::sin(th)};
    }
    return impl_->point(t);
}

double BoundaryCurve::tangent_angle(double s) const {
    double t = clamp_param(*impl_, s);
    if (on_ray(*impl_, t)) t = std::copysign(impl_->window, t);
    return impl_->theta(t);
}

Vec2 BoundaryCurve::tangent(double s) const {
    const double th = tangent_angle(s);
    return {std::cos(th), std::sin(th)};
}

Vec2 BoundaryCurve::second_derivative(double s) const {
    const double th = tangent_angle(s);
    const double g = curvature(s);
    return {-g * std::sin(th), g * std::cos(th)};
}

double BoundaryCurve::curvature(double s) const {
    const double t = clamp_param(*impl_, s);
    if (on_ray(*impl_, t)) return 0.0;
    return impl_->gamma(t);
}

double BoundaryCurve::curvature_deriv(double s) const {
    const double t = clamp_param(*impl_, s);
    if (on_ray(*impl_, t)) return 0.0;
    return impl_->dgamma(t);
}

double BoundaryCurve::curvature_deriv2(double s) const {
    const double t = clamp_param(*impl_, s);
    if (on_ray(*impl_, t)) return 0.0;
    return impl_->d2gamma(t);
}

CurveFamily BoundaryCurve::family() const { return impl_->family; }
CurveTopology BoundaryCurve::topology() const { return impl_->topology; }
double BoundaryCurve::perimeter() const { return impl_->perimeter; }
double BoundaryCurve::window() const { return impl_->window; }
std::string BoundaryCurve::descriptor() const { return impl_->descriptor; }
bool BoundaryCurve::is_graph() const { return impl_->graph; }

double BoundaryCurve::graph_height(double x) const {
    if (!impl_->graph) throw std::logic_error("graph_height: not a graph-type curve");
    return impl_->height(x);
}

double BoundaryCurve::graph_slope(double x) const {
    if (!impl_->graph) throw std::logic_error("graph_slope: not a graph-type curve");
    return impl_->slope(x);
}

std::optional<double> BoundaryCurve::wedge_half_angle() const {
    return impl_->wedge_half_angle;
}

BoundaryCurve BoundaryCurve::reversed() const {
    auto base = impl_;
    auto impl = std::make_shared<Impl>();
    impl->family = base->family;
    impl->topology = base->topology;
    impl->perimeter = base->perimeter;
    impl->window = base->window;
    impl->descriptor = base->descriptor + "/reversed";
    const double L = base->perimeter;
    const bool closed = base->topology == CurveTopology::closed_loop;
    auto flip = [closed, L](double s) { return closed ? L - s : -s; };
    impl->point = [base, flip](double s) { return base->point(flip(s)); };
    impl->theta = [base, flip](double s) { return base->theta(flip(s)) + pi; };
    impl->gamma = [base, flip](double s) { return -base->gamma(flip(s)); };
    impl->dgamma = [base, flip](double s) { return base->dgamma(flip(s)); };
    impl->d2gamma = [base, flip](double s) { return -base->d2gamma(flip(s)); };
    return BoundaryCurve(impl);
}

// ---- factories -------------------------------------------------------------

BoundaryCurve BoundaryCurve::line(double window) {
    auto impl = std::make_shared<Impl>();
    impl->family = CurveFamily::line;
    impl->window = window;
    impl->descriptor = "line";
    impl->point = [](double s) { return Vec2{s, 0.0}; };
    impl->theta = [](double) { return 0.0; };
    impl->gamma = [](double) { return 0.0; };
    impl->dgamma = [](double) { return 0.0; };
    impl->d2gamma = [](double) { return 0.0; };
    impl->graph = true;
    impl->height = [](double) { return 0.0; };
    impl->slope = [](double) { return 0.0; };
    return BoundaryCurve(impl);
}

BoundaryCurve BoundaryCurve::circle(double radius) {
    if (radius <= 0) throw std::invalid_argument("circle: radius must be positive");
    auto impl = std::make_shared<Impl>();
    impl->family = CurveFamily::circle;
    impl->topology = CurveTopology::closed_loop;
    impl->perimeter = 2.0 * pi * radius;
    impl->descriptor = "circle(R=" + std::to_string(radius) + ")";
    const double R = radius;
    impl->point = [R](double s) { return Vec2{R * std::cos(s / R), R * std::sin(s / R)}; };
    impl->theta = [R](double s) { return s / R + 0.5 * pi; };
    impl->gamma = [R](double) { return 1.0 / R; };
    impl->dgamma = [](double) { return 0.0; };
    impl->d2gamma = [](double) { return 0.0; };
    return BoundaryCurve(impl);
}

namespace {

/// Arc-length inversion for the parabola y = x^2/2.
double parabola_x_of_s(double s) {
    auto arclen = [](double x) { return 0.5 * (x * std::sqrt(1.0 + x * x) + std::asinh(x)); };
    double x = std::abs(s) < 1 ? s : std::copysign(std::sqrt(2.0 * std::abs(s)), s);
    for (int it = 0; it < 60; ++it) {
        const double dx = (arclen(x) - s) / std::sqrt(1.0 + x * x);
        x -= dx;
        if (std::abs(dx) < 1e-14 * (1.0 + std::abs(x))) break;
    }
    return x;
}

} // namespace

BoundaryCurve BoundaryCurve::parabola(double window) {
    auto impl = std::make_shared<Impl>();
    impl->family = CurveFamily::parabola;
    impl->window = window;
    impl->descriptor = "parabola";
    impl->point = [](double s) {
        const double x = parabola_x_of_s(s);
        return Vec2{x, 0.5 * x * x};
    };
    impl->theta = [](double s) { return std::atan(parabola_x_of_s(s)); };
    impl->gamma = [](double s) {
        const double x = parabola_x_of_s(s);
        return std::pow(1.0 + x * x, -1.5);
    };
    impl->dgamma = [](double s) {
        const double x = parabola_x_of_s(s);
        return -3.0 * x * std::pow(1.0 + x * x, -3.0);
    };
    impl->d2gamma = [](double s) {
        const double x = parabola_x_of_s(s);
        return (15.0 * x * x - 3.0) * std::pow(1.0 + x * x, -4.5);
    };
    impl->graph = true;
    impl->height = [](double x) { return 0.5 * x * x; };
    impl->slope = [](double x) { return x; };
    return BoundaryCurve(impl);
}

BoundaryCurve BoundaryCurve::line_bump(double amplitude, double separation, double window) {
    const double A = amplitude, c = separation;
    CurvatureProfile profile;
    profile.name = "sech_pair";
    profile.value = [A, c](double s) { return A * (sech(s) - sech(s - c)); };
    profile.deriv = [A, c](double s) {
        auto d = [](double t) { return -sech(t) * std::tanh(t); };
        return A * (d(s) - d(s - c));
    };
    profile.deriv2 = [A, c](double s) {
        auto d2 = [](double t) {
            const double sh = sech(t), th = std::tanh(t);
            return sh * (th * th - sh * sh);
        };
        return A * (d2(s) - d2(s - c));
    };
    profile.turning = [A, c](double s) {
        return A * (std::atan(std::sinh(s)) - std::atan(std::sinh(s - c)));
    };
    auto curve = from_curvature(profile, window, 0.0);
    auto impl = std::make_shared<Impl>(*curve.impl_);
    impl->family = CurveFamily::line_bump;
    impl->descriptor = "line_bump(A=" + std::to_string(amplitude) + ")";
    return BoundaryCurve(impl);
}

BoundaryCurve BoundaryCurve::wedge_smoothed(double half_angle, double fillet, double window) {
    if (!(half_angle > 0.0 && half_angle < 0.5 * pi))
        throw std::invalid_argument("wedge_smoothed: half angle must lie in (0, pi/2)");
    if (fillet <= 0 || fillet >= window)
        throw std::invalid_argument("wedge_smoothed: fillet must lie in (0, window)");
    const double turn = pi - 2.0 * half_angle;  // total turning across the corner
    const double w = fillet;
    // C^3 curvature bump (1-t^2)^4 normalized to unit mass.
    const double cnorm = 315.0 / 256.0;
    auto bump = [cnorm](double t) {
        if (std::abs(t) >= 1.0) return 0.0;
        const double q = 1.0 - t * t;
        return cnorm * q * q * q * q;
    };
    auto bump_cdf = [cnorm](double t) {
        if (t <= -1.0) return 0.0;
        if (t >= 1.0) return 1.0;
        const double p = t - 4.0 * t * t * t / 3.0 + 6.0 * std::pow(t, 5) / 5.0 -
                         4.0 * std::pow(t, 7) / 7.0 + std::pow(t, 9) / 9.0;
        return cnorm * (p + 128.0 / 315.0);
    };
    CurvatureProfile profile;
    profile.name = "wedge_fillet";
    profile.value = [=](double s) { return (turn / w) * bump(s / w); };
    profile.deriv = [=](double s) {
        const double t = s / w;
        if (std::abs(t) >= 1.0) return 0.0;
        const double q = 1.0 - t * t;
        return (turn / (w * w)) * cnorm * (-8.0 * t) * q * q * q;
    };
    profile.deriv2 = [=](double s) {
        const double t = s / w;
        if (std::abs(t) >= 1.0) return 0.0;
        const double q = 1.0 - t * t;
        return (turn / (w * w * w)) * cnorm * 8.0 * q * q * (7.0 * t * t - 1.0);
    };
    profile.turning = [=](double s) { return -0.5 * turn + turn * bump_cdf(s / w); };
    auto curve = from_curvature(profile, window, 0.0);
    auto impl = std::make_shared<Impl>(*curve.impl_);
    impl->family = CurveFamily::wedge_smoothed;
    impl->descriptor = "wedge_smoothed(half_angle=" + std::to_string(half_angle) + ")";
    impl->wedge_half_angle = half_angle;
    return BoundaryCurve(impl);
}

BoundaryCurve BoundaryCurve::graph_bump(double amplitude, double width, double window) {
    if (width <= 0) throw std::invalid_argument("graph_bump: width must be positive");
    const double A = amplitude, w = width;
    // Height derivatives h, h', h'', h''', h''''.
    auto h0 = [A, w](double x) { const double z = x / w; return A * std::exp(-z * z); };
    auto h1 = [A, w](double x) {
        const double z = x / w;
        return A * std::exp(-z * z) * (-2.0 * z) / w;
    };
    auto h2 = [A, w](double x) {
        const double z = x / w;
        return A * std::exp(-z * z) * (4.0 * z * z - 2.0) / (w * w);
    };
    auto h3 = [A, w](double x) {
        const double z = x / w;
        return A * std::exp(-z * z) * (12.0 * z - 8.0 * z * z * z) / (w * w * w);
    };
    auto h4 = [A, w](double x) {
        const double z = x / w;
        return A * std::exp(-z * z) * (16.0 * std::pow(z, 4) - 48.0 * z * z + 12.0) /
               (w * w * w * w);
    };

    // Arc length along the graph, anchored at x = 0, with inversion.
    auto speed = [h1](double x) { return std::sqrt(1.0 + h1(x) * h1(x)); };
    const double span = 1.25 * window + 4.0 * width;
    auto arclen = std::make_shared<CumulativeIntegral>(speed, -span, span, 0.0, 0.0);
    auto x_of_s = [arclen, speed, span](double s) {
        double x = std::clamp(s, -span, span);
        for (int it = 0; it < 80; ++it) {
            const double dx = ((*arclen)(x) - s) / speed(x);
            x -= dx;
            if (std::abs(dx) < 1e-14 * (1.0 + std::abs(x))) break;
        }
        return x;
    };

    auto gamma_of_x = [h1, h2](double x) {
        const double q = 1.0 + h1(x) * h1(x);
        return h2(x) / (q * std::sqrt(q));
    };
    auto dgamma_ds_of_x = [h1, h2, h3](double x) {
        const double p = h1(x), q = 1.0 + p * p;
        return h3(x) / (q * q) - 3.0 * p * h2(x) * h2(x) / (q * q * q);
    };
    auto d2gamma_ds2_of_x = [h1, h2, h3, h4](double x) {
        const double p = h1(x), r = h2(x), t = h3(x), q = 1.0 + p * p;
        const double d = h4(x) / (q * q) - 10.0 * p * r * t / (q * q * q) -
                         3.0 * r * r * r / (q * q * q) +
                         18.0 * p * p * r * r * r / (q * q * q * q);
        return d / std::sqrt(q);
    };

    auto impl = std::make_shared<Impl>();
    impl->family = CurveFamily::graph_bump;
    impl->window = window;
    impl->descriptor = "graph_bump(A=" + std::to_string(amplitude) + ")";
    impl->point = [x_of_s, h0](double s) {
        const double x = x_of_s(s);
        return Vec2{x, h0(x)};
    };
    impl->theta = [x_of_s, h1](double s) { return std::atan(h1(x_of_s(s))); };
    impl->gamma = [x_of_s, gamma_of_x](double s) { return gamma_of_x(x_of_s(s)); };
    impl->dgamma = [x_of_s, dgamma_ds_of_x](double s) { return dgamma_ds_of_x(x_of_s(s)); };
    impl->d2gamma = [x_of_s, d2gamma_ds2_of_x](double s) { return d2gamma_ds2_of_x(x_of_s(s)); };
    impl->graph = true;
    impl->height = h0;
    impl->slope = h1;
    return BoundaryCurve(impl);
}

namespace {

std::shared_ptr<Impl> build_profile_impl(const CurvatureProfile& profile, double lo,
                                         double hi, double anchor) {
    auto impl = std::make_shared<Impl>();
    auto gamma = profile.value;
    if (!gamma) throw std::invalid_argument("from_curvature: profile value missing");

    impl->gamma = gamma;
    if (profile.deriv) {
        impl->dgamma = profile.deriv;
    } else {
        impl->dgamma = [gamma](double s) {
            const double h = 1e-5 * (1.0 + std::abs(s));
            return (gamma(s + h) - gamma(s - h)) / (2.0 * h);
        };
    }
    if (profile.deriv2) {
        impl->d2gamma = profile.deriv2;
    } else {
        impl->d2gamma = [gamma](double s) {
            const double h = 2e-4 * (1.0 + std::abs(s));
            return (gamma(s + h) - 2.0 * gamma(s) + gamma(s - h)) / (h * h);
        };
    }

    std::function<double(double)> theta;
    if (profile.turning) {
        theta = profile.turning;
    } else {
        auto cum = std::make_shared<CumulativeIntegral>(gamma, lo, hi, anchor, 0.0);
        theta = [cum](double s) { return (*cum)(s); };
    }
    impl->theta = theta;

    auto cx = std::make_shared<CumulativeIntegral>(
        [theta](double s) { return std::cos(theta(s)); }, lo, hi, anchor, 0.0);
    auto cy = std::make_shared<CumulativeIntegral>(
        [theta](double s) { return std::sin(theta(s)); }, lo, hi, anchor, 0.0);
    impl->point = [cx, cy](double s) { return Vec2{(*cx)(s), (*cy)(s)}; };
    return impl;
}

} // namespace

BoundaryCurve BoundaryCurve::from_curvature(CurvatureProfile profile, double window,
                                            double anchor) {
    auto impl = build_profile_impl(profile, -window, window, anchor);
    impl->family = CurveFamily::from_curvature;
    impl->window = window;
    impl->descriptor = "from_curvature(" + profile.name + ")";
    return BoundaryCurve(std::shared_ptr<const Impl>(impl));
}

BoundaryCurve BoundaryCurve::from_curvature_closed(CurvatureProfile profile, double length) {
    auto impl = build_profile_impl(profile, 0.0, length, 0.0);
    impl->family = CurveFamily::from_curvature;
    impl->topology = CurveTopology::closed_loop;
    impl->perimeter = length;
    impl->descriptor = "from_curvature_closed(" + profile.name + ")";
    const Vec2 gap = impl->point(length) - impl->point(0.0);
    const double turn = impl->theta(length) - impl->theta(0.0);
    if (norm(gap) > 1e-8 * length || std::abs(turn - 2.0 * pi) > 1e-8)
        throw std::invalid_argument(
            "from_curvature_closed: profile does not close up (position gap " +
            std::to_string(norm(gap)) + ", turning " + std::to_string(turn) + ")");
    return BoundaryCurve(std::shared_ptr<const Impl>(impl));
}

BoundaryCurve BoundaryCurve::parallel_offset(const BoundaryCurve& base, double offset) {
    auto bimpl = base.impl_;
    const bool closed = bimpl->topology == CurveTopology::closed_loop;
    const double lo = closed ? 0.0 : -bimpl->window;
    const double hi = closed ? bimpl->perimeter : bimpl->window;

    // Jacobian of the offset must stay positive on the whole window.
    for (int i = 0; i <= 512; ++i) {
        const double s = lo + (hi - lo) * i / 512.0;
        if (offset * bimpl->gamma(s) >= 1.0)
            throw SingularCoordinatesError("parallel_offset: offset*curvature >= 1");
    }

    auto gamma_b = bimpl->gamma;
    auto jac = [gamma_b, offset](double s) { return 1.0 - offset * gamma_b(s); };
    auto arclen = std::make_shared<CumulativeIntegral>(jac, lo, hi, lo, 0.0);
    const double total = (*arclen)(hi);
    auto s_of_sigma = [arclen, jac, lo, hi](double sigma) {
        double s = std::clamp(lo + sigma, lo, hi);
        for (int it = 0; it < 80; ++it) {
            const double ds = ((*arclen)(s) - sigma) / jac(s);
            s -= ds;
            if (std::abs(ds) < 1e-14 * (1.0 + std::abs(s))) break;
        }
        return s;
    };

    auto impl = std::make_shared<Impl>();
    impl->family = CurveFamily::parallel;
    impl->topology = bimpl->topology;
    impl->perimeter = closed ? total : 0.0;
    impl->window = closed ? 0.0 : 0.5 * total;
    impl->descriptor = bimpl->descriptor + "/parallel(d=" + std::to_string(offset) + ")";
    // Infinite curves: sigma is anchored so that sigma(0) keeps s = 0 at 0.
    const double sigma_shift = closed ? 0.0 : (*arclen)(0.0);
    auto to_s = [s_of_sigma, sigma_shift](double sigma) { return s_of_sigma(sigma + sigma_shift); };

    impl->point = [bimpl, to_s, offset](double sigma) {
        const double s = to_s(sigma);
        const Vec2 p = bimpl->point(s);
        const double th = bimpl->theta(s);
        // interior-side offset: left normal (-sin, cos)
        return Vec2{p.x - offset * std::sin(th), p.y + offset * std::cos(th)};
    };
    impl->theta = [bimpl, to_s](double sigma) { return bimpl->theta(to_s(sigma)); };
    impl->gamma = [bimpl, to_s, offset](double sigma) {
        const double s = to_s(sigma);
        return bimpl->gamma(s) / (1.0 - offset * bimpl->gamma(s));
    };
    impl->dgamma = [bimpl, to_s, offset](double sigma) {
        const double s = to_s(sigma);
        const double j = 1.0 - offset * bimpl->gamma(s);
        return bimpl->dgamma(s) / (j * j * j);
    };
    impl->d2gamma = [bimpl, to_s, offset](double sigma) {
        const double s = to_s(sigma);
        const double j = 1.0 - offset * bimpl->gamma(s);
        const double g1 = bimpl->dgamma(s), g2 = bimpl->d2gamma(s);
        return g2 / std::pow(j, 4) + 3.0 * offset * g1 * g1 / std::pow(j, 5);
    };
    return BoundaryCurve(std::shared_ptr<const Impl>(impl));
}

// ---- free operations --------------------------------------------------------

Vec2 tube_map(const BoundaryCurve& curve, double s, double u, TubeSide side) {
    if (u < 0) throw std::invalid_argument("tube_map: u must be nonnegative");
    const Vec2 p = curve.point(s);
    const Vec2 t = curve.tangent(s);
    if (side == TubeSide::interior) return {p.x - u * t.y, p.y + u * t.x};
    return {p.x + u * t.y, p.y - u * t.x};
}

double parallel_curvature(double gamma, double offset) {
    const double j = 1.0 - offset * gamma;
    if (j <= 0)
        throw SingularCoordinatesError("parallel_curvature: offset*gamma >= 1");
    return gamma / j;
}

// ---- curvature statistics ---------------------------------------------------

namespace {

double refine_extremum(const std::function<double(double)>& f, double s_lo, double s_hi) {
    return num::golden_section_max(f, s_lo, s_hi, 1e-12 * (1.0 + std::abs(s_hi)));
}

} // namespace

CurvatureStats curvature_stats(const BoundaryCurve& curve, double s_min, double s_max,
                               int n_samples) {
    if (n_samples < 3) throw std::invalid_argument("curvature_stats: need n_samples >= 3");
    if (!(s_max > s_min)) throw std::invalid_argument("curvature_stats: empty window");

    std::vector<double> s(n_samples), g(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        s[i] = s_min + (s_max - s_min) * i / (n_samples - 1.0);
        g[i] = curve.curvature(s[i]);
    }

    auto refine_max_of = [&](const std::function<double(double)>& f) {
        int best = 0;
        double best_val = f(s[0]);
        for (int i = 1; i < n_samples; ++i) {
            const double v = f(s[i]);
            if (v > best_val) {
                best_val = v;
                best = i;
            }
        }
        const double lo = s[std::max(0, best - 1)];
        const double hi = s[std::min(n_samples - 1, best + 1)];
        const double at = refine_extremum(f, lo, hi);
        return std::pair<double, double>{at, f(at)};
    };

    CurvatureStats st;
    auto gamma_fn = [&curve](double t) { return curve.curvature(t); };
    auto [s_hi, v_hi] = refine_max_of(gamma_fn);
    auto [s_lo_at, v_lo_neg] = refine_max_of([&curve](double t) { return -curve.curvature(t); });
    (void)s_lo_at;
    st.gamma_max = v_hi;
    st.gamma_min = -v_lo_neg;
    st.s_at_max = s_hi;
    st.gamma_abs_max = std::max(std::abs(st.gamma_max), std::abs(st.gamma_min));
    st.gamma_deriv_abs_max =
        refine_max_of([&curve](double t) { return std::abs(curve.curvature_deriv(t)); }).second;
    st.gamma_deriv2_abs_max =
        refine_max_of([&curve](double t) { return std::abs(curve.curvature_deriv2(t)); }).second;

    if (st.gamma_abs_max < 1e-13) {
        st.flat = true;
        st.s_at_max = 0.0;
        st.decay_exponent_fit = 0.0;
        return st;
    }

    // Decay exponent: log|gamma| vs log<s> over the outer half of the window.
    const double outer = 0.5 * std::max(std::abs(s_min), std::abs(s_max));
    std::vector<double> xs, ys;
    for (int i = 0; i < n_samples; ++i) {
        if (std::abs(s[i]) >= outer && std::abs(g[i]) > 1e-300) {
            xs.push_back(0.5 * std::log1p(s[i] * s[i]));
            ys.push_back(std::log(std::abs(g[i])));
        }
    }
    st.decay_exponent_fit = xs.size() >= 2 ? num::fit_line(xs, ys).slope : 0.0;
    return st;
}

// ---- assumption checks --------------------------------------------------------

namespace {

double min_far_pair_distance(const BoundaryCurve& curve, double a, int n, TubeSide side,
                             double lo, double hi, bool closed, double L) {
    std::vector<Vec2> pts(n);
    std::vector<double> ss(n);
    for (int i = 0; i < n; ++i) {
        // closed loops: avoid double-counting the seam point
        ss[i] = closed ? lo + (hi - lo) * i / n : lo + (hi - lo) * i / (n - 1.0);
        pts[i] = tube_map(curve, ss[i], a, side);
    }
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double ds = std::abs(ss[i] - ss[j]);
            if (closed) ds = std::min(ds, L - ds);
            if (ds <= 3.0 * a) continue;
            best = std::min(best, norm(pts[i] - pts[j]));
        }
    }
    return best;
}

} // namespace

AssumptionReport check_assumptions(const BoundaryCurve& curve, double a, int n_samples,
                                   TubeSide side) {
    if (a <= 0) throw std::invalid_argument("check_assumptions: a must be positive");
    const bool closed = curve.topology() == CurveTopology::closed_loop;
    const double lo = closed ? 0.0 : -curve.window();
    const double hi = closed ? curve.perimeter() : curve.window();
    const double L = closed ? curve.perimeter() : 0.0;

    AssumptionReport rep;
    rep.stats = curvature_stats(curve, lo, hi, std::max(n_samples, 1024));

    // Only curvature toward the tube side can fold the tube onto itself.
    const double fold =
        side == TubeSide::interior ? rep.stats.gamma_max : -rep.stats.gamma_min;
    const bool local_ok = a * std::max(fold, 0.0) < 1.0;

    const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
    rep.min_tube_distance =
        min_far_pair_distance(curve, a, n_samples, side, lo, hi, closed, L);
    const bool global_ok = rep.min_tube_distance > 1e-9 * scale;
    rep.injective = local_ok && global_ok;

    // Width limit: bisection on the sampled test below the local bound.
    double a_cap = fold > 0 ? 0.999 / fold : hi - lo;
    auto passes = [&](double width) {
        return min_far_pair_distance(curve, width, 512, side, lo, hi, closed, L) >
               1e-9 * scale;
    };
    if (passes(a_cap)) {
        rep.tube_halfwidth_limit = a_cap;
    } else {
        double good = 0.0, bad = a_cap;
        for (int it = 0; it < 40; ++it) {
            const double mid = 0.5 * (good + bad);
            (passes(mid) ? good : bad) = mid;
        }
        rep.tube_halfwidth_limit = good;
    }

    if (closed || rep.stats.flat) {
        rep.decay_ok = true;
    } else {
        const double tail = std::abs(curve.curvature(hi)) + std::abs(curve.curvature(lo));
        rep.decay_ok = rep.stats.decay_exponent_fit <= -1.0 || tail < 1e-12;
    }
    return rep;
}

// ---- JSON construction --------------------------------------------------------

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw std::invalid_argument("curve JSON: unknown key \"" + it.key() + "\"");
    }
}

double get_or(const json& obj, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number())
        throw std::invalid_argument("curve JSON: key \"" + key + "\" must be a number");
    return obj[key].get<double>();
}

BoundaryCurve curve_from_json_obj(const json& obj);

CurvatureProfile named_profile(const std::string& id, double amplitude, double scale) {
    CurvatureProfile p;
    p.name = id;
    if (id == "sech") {
        p.value = [amplitude, scale](double s) { return amplitude * sech(s / scale); };
        p.deriv = [amplitude, scale](double s) {
            const double t = s / scale;
            return -amplitude * sech(t) * std::tanh(t) / scale;
        };
        p.deriv2 = [amplitude, scale](double s) {
            const double t = s / scale;
            const double sh = sech(t), th = std::tanh(t);
            return amplitude * sh * (th * th - sh * sh) / (scale * scale);
        };
        p.turning = [amplitude, scale](double s) {
            return amplitude * scale * std::atan(std::sinh(s / scale));
        };
    } else if (id == "negative_lorentzian") {
        // gamma(s) = -amplitude / (1 + (s/scale)^2), the concave test profile
        p.value = [amplitude, scale](double s) {
            const double t = s / scale;
            return -amplitude / (1.0 + t * t);
        };
        p.deriv = [amplitude, scale](double s) {
            const double t = s / scale;
            const double q = 1.0 + t * t;
            return amplitude * 2.0 * t / (q * q * scale);
        };
        p.deriv2 = [amplitude, scale](double s) {
            const double t = s / scale;
            const double q = 1.0 + t * t;
            return amplitude * (2.0 * q - 8.0 * t * t) / (q * q * q * scale * scale);
        };
    } else {
        throw std::invalid_argument("curve JSON: unknown curvature profile \"" + id + "\"");
    }
    return p;
}

BoundaryCurve curve_from_json_obj(const json& obj) {
    if (!obj.is_object() || !obj.contains("family"))
        throw std::invalid_argument("curve JSON: expected an object with a \"family\" key");
    const std::string family = obj["family"].get<std::string>();

    if (family == "line") {
        require_keys(obj, {"family", "window"});
        return BoundaryCurve::line(get_or(obj, "window", 40.0));
    }
    if (family == "circle") {
        require_keys(obj, {"family", "R"});
        if (!obj.contains("R")) throw std::invalid_argument("curve JSON: circle needs R");
        return BoundaryCurve::circle(obj["R"].get<double>());
    }
    if (family == "parabola") {
        require_keys(obj, {"family", "window"});
        return BoundaryCurve::parabola(get_or(obj, "window", 120.0));
    }
    if (family == "line_bump") {
        require_keys(obj, {"family", "amplitude", "separation", "window"});
        return BoundaryCurve::line_bump(get_or(obj, "amplitude", 1.0),
                                        get_or(obj, "separation", 8.0),
                                        get_or(obj, "window", 24.0));
    }
    if (family == "wedge_smoothed") {
        require_keys(obj, {"family", "half_angle", "fillet", "window"});
        if (!obj.contains("half_angle"))
            throw std::invalid_argument("curve JSON: wedge_smoothed needs half_angle");
        return BoundaryCurve::wedge_smoothed(obj["half_angle"].get<double>(),
                                             get_or(obj, "fillet", 1.0),
                                             get_or(obj, "window", 40.0));
    }
    if (family == "graph_bump") {
        require_keys(obj, {"family", "amplitude", "width", "window"});
        if (!obj.contains("amplitude"))
            throw std::invalid_argument("curve JSON: graph_bump needs amplitude");
        return BoundaryCurve::graph_bump(obj["amplitude"].get<double>(),
                                         get_or(obj, "width", 1.0),
                                         get_or(obj, "window", 30.0));
    }
    if (family == "from_curvature") {
        require_keys(obj, {"family", "profile", "amplitude", "scale", "window"});
        if (!obj.contains("profile"))
            throw std::invalid_argument("curve JSON: from_curvature needs a profile id");
        auto profile = named_profile(obj["profile"].get<std::string>(),
                                     get_or(obj, "amplitude", 1.0), get_or(obj, "scale", 1.0));
        return BoundaryCurve::from_curvature(profile, get_or(obj, "window", 40.0));
    }
    if (family == "parallel") {
        require_keys(obj, {"family", "base", "offset"});
        if (!obj.contains("base") || !obj.contains("offset"))
            throw std::invalid_argument("curve JSON: parallel needs base and offset");
        return BoundaryCurve::parallel_offset(curve_from_json_obj(obj["base"]),
                                              obj["offset"].get<double>());
    }
    throw std::invalid_argument("curve JSON: unknown family \"" + family + "\"");
}

} // namespace

BoundaryCurve curve_from_json(const std::string& json_text) {
    json obj;
    try {
        obj = json::parse(json_text);
    } catch (const json::parse_error& err) {
        throw std::invalid_argument(std::string("curve JSON: parse error: ") + err.what());
    }
    return curve_from_json_obj(obj);
}

} // namespace robin
