#include "robin/numerics.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace robin::num {

namespace {

GaussRule compute_rule(int order) {
    // Newton iteration on Legendre polynomials, symmetric nodes.
    GaussRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double p_deriv = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            p_deriv = order * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / p_deriv;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[order - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * p_deriv * p_deriv);
        rule.weights[i] = w;
        rule.weights[order - 1 - i] = w;
    }
    return rule;
}

} // namespace

const GaussRule& gauss_legendre(int order) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
    return it->second;
}

double integrate_gauss(const Fn& f, double a, double b, int order) {
    const GaussRule& rule = gauss_legendre(order);
    const double mid = 0.5 * (a + b);
    const double halfw = 0.5 * (b - a);
    double sum = 0;
    for (int i = 0; i < order; ++i)
        sum += rule.weights[i] * f(mid + halfw * rule.nodes[i]);
    return halfw * sum;
}

double integrate_panels(const Fn& f, double a, double b, int panels, int order) {
    double sum = 0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p)
        sum += integrate_gauss(f, a + p * h, a + (p + 1) * h, order);
    return sum;
}

namespace {

double simpson(double fa, double fm, double fb, double h6) {
    return h6 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const Fn& f, double a, double b, double fa, double fm, double fb,
                     double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    if (!std::isfinite(flm) || !std::isfinite(frm))
        throw std::runtime_error("integrate_adaptive: non-finite integrand value");
    const double left = simpson(fa, flm, fm, (m - a) / 6.0);
    const double right = simpson(fm, frm, fb, (b - m) / 6.0);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double integrate_adaptive(const Fn& f, double a, double b, double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    const double fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
    if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb))
        throw std::runtime_error("integrate_adaptive: non-finite integrand value");
    const double whole = simpson(fa, fm, fb, (b - a) / 6.0);
    return adaptive_step(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

double golden_section_max(const Fn& f, double lo, double hi, double xtol) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

double bisect(const Fn& f, double lo, double hi, double xtol, int max_iter) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    if (std::signbit(flo) == std::signbit(fhi))
        throw std::invalid_argument("bisect: no sign change on bracket");
    for (int i = 0; i < max_iter && (hi - lo) > xtol * (1.0 + std::abs(lo) + std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if (fmid == 0) return mid;
        if (std::signbit(fmid) == std::signbit(flo)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double bisect_expanding(const Fn& f, double lo, double hi, double xtol) {
    const double flo = f(lo);
    if (flo == 0) return lo;
    double span = hi - lo;
    for (int i = 0; i < 200; ++i) {
        if (std::signbit(f(hi)) != std::signbit(flo) || f(hi) == 0)
            return bisect(f, lo, hi, xtol);
        span *= 2.0;
        hi = lo + span;
    }
    throw std::runtime_error("bisect_expanding: no sign change found");
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need at least two matching points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0;
    const double mean_y = sy / n;
    double ss_tot = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double pred = fit.slope * x[i] + fit.intercept;
        ss_res += (y[i] - pred) * (y[i] - pred);
        ss_tot += (y[i] - mean_y) * (y[i] - mean_y);
    }
    fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

} // namespace robin::num
