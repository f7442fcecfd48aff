#include "robin/exact_models.hpp"

#include "robin/errors.hpp"
#include "robin/numerics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace robin {

namespace {

constexpr double euler_gamma = 0.5772156649015328606;
constexpr double pi = std::numbers::pi;

/// K_0 and K_1 from the ascending series; accurate for x <= 2 where the
/// log-term cancellation stays below one digit.
void bessel_k01_series(double x, double& k0, double& k1) {
    const double L = std::log(0.5 * x) + euler_gamma;
    const double q = 0.25 * x * x;
    double term = 1.0;  // (x^2/4)^k / (k!)^2
    double hk = 0.0;    // harmonic number
    k0 = -L;            // k = 0 contribution: h_0 - L
    k1 = 1.0 / x;       // k = 0 contribution
    for (int k = 1; k < 60; ++k) {
        term *= q / (static_cast<double>(k) * k);
        hk += 1.0 / k;
        const double c = hk - L;
        k0 += term * c;
        k1 += (term / x) * (1.0 - 2.0 * k * c);
        if (term * (std::abs(c) + 1.0) < 1e-18 * (std::abs(k0) + 1.0)) break;
    }
}

/// Steed continued fraction for K_0, K_1; reliable over the mid range where
/// neither the series nor the asymptotic expansion reaches full precision.
void bessel_k01_cf(double x, double& k0, double& k1) {
    constexpr double eps = 1e-16;
    const double a1 = 0.25;  // 1/4 - mu^2 with mu = 0
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    double q = a1, c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= 30000; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < eps) break;
    }
    h = a1 * h;
    k0 = std::sqrt(pi / (2.0 * x)) * std::exp(-x) / s;
    k1 = k0 * (x + 0.5 - h) / x;
}

/// Large-argument expansion with optimal truncation; full precision for
/// x >= 14 where the smallest term is below 1e-13.
double bessel_k_asymptotic(int mu, double x) {
    const double mu4 = 4.0 * mu * mu;
    double term = 1.0, sum = 1.0;
    double prev = std::abs(term);
    for (int k = 1; k < 60; ++k) {
        term *= (mu4 - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * x);
        if (std::abs(term) >= prev) break;  // divergent tail reached
        sum += term;
        prev = std::abs(term);
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return std::sqrt(pi / (2.0 * x)) * std::exp(-x) * sum;
}

void bessel_k01(double x, double& k0, double& k1) {
    if (x <= 2.0) {
        bessel_k01_series(x, k0, k1);
    } else if (x < 14.0) {
        bessel_k01_cf(x, k0, k1);
    } else {
        k0 = bessel_k_asymptotic(0, x);
        k1 = bessel_k_asymptotic(1, x);
    }
}

} // namespace

double bessel_k(int m, double x) {
    if (x <= 0) throw std::domain_error("bessel_k: x must be positive");
    if (m < 0) throw std::domain_error("bessel_k: order must be nonnegative");
    double k0, k1;
    bessel_k01(x, k0, k1);
    if (!std::isfinite(k0) || !std::isfinite(k1))
        throw RangeError("bessel_k: kernel over/underflowed");
    if (m == 0) return k0;
    if (m == 1) return k1;
    double prev = k0, cur = k1;
    for (int j = 1; j < m; ++j) {
        const double next = prev + (2.0 * j / x) * cur;
        prev = cur;
        cur = next;
        if (!std::isfinite(cur)) throw RangeError("bessel_k: recurrence overflow");
    }
    return cur;
}

double bessel_k_logderiv(int m, double x) {
    if (x <= 0) throw std::domain_error("bessel_k_logderiv: x must be positive");
    if (m < 0) throw std::domain_error("bessel_k_logderiv: order must be nonnegative");
    const double km = bessel_k(m, x);
    const double k_lo = bessel_k(m == 0 ? 1 : m - 1, x);  // K_{-1} = K_1
    const double k_hi = bessel_k(m + 1, x);
    if (km == 0.0) throw RangeError("bessel_k_logderiv: K_m underflowed");
    return x * (k_lo + k_hi) / (2.0 * km);
}

DiscExteriorState disc_exterior_eigenvalue(double radius, double beta, int m) {
    if (radius <= 0 || beta <= 0)
        throw std::invalid_argument("disc_exterior_eigenvalue: radius, beta must be positive");
    if (m < 0) throw std::invalid_argument("disc_exterior_eigenvalue: m must be >= 0");
    DiscExteriorState st;
    st.radius = radius;
    st.beta = beta;
    st.m = m;
    st.alpha_scaled = beta * radius;
    st.multiplicity = m == 0 ? 1 : 2;
    if (!(st.alpha_scaled > m))
        throw RegimeError("disc_exterior_eigenvalue: no bound state (needs beta*R > m)");
    const double alpha = st.alpha_scaled;
    // The log-derivative is strictly increasing, tends to m as u -> 0+ and
    // exceeds u everywhere, so the unique root lies in (0, alpha). The root
    // can sit below u = m (alpha close to m), so the lower endpoint walks
    // down geometrically until the sign changes.
    auto f = [m, alpha](double u) { return bessel_k_logderiv(m, u) - alpha; };
    double lo = std::max(static_cast<double>(m), 1e-8) * (1.0 + 1e-12);
    for (int t = 0; t < 200 && f(lo) >= 0.0; ++t) lo *= 0.5;
    if (f(lo) >= 0.0)
        throw RegimeError("disc_exterior_eigenvalue: failed to bracket the spectral root");
    st.u_root = num::bisect(f, lo, alpha, 1e-13);
    st.eigenvalue = -(st.u_root / radius) * (st.u_root / radius);
    return st;
}

double disc_exterior_asymptotic(double radius, double beta, int m) {
    if (radius <= 0) throw std::invalid_argument("disc_exterior_asymptotic: radius > 0");
    if (beta <= 0) throw std::invalid_argument("disc_exterior_asymptotic: beta > 0");
    const double a = beta - 0.5 / radius;
    return -a * a + (static_cast<double>(m) * m - 0.25) / (radius * radius);
}

double quadrant_eigenvalue(double beta) {
    if (beta < 0) throw std::invalid_argument("quadrant_eigenvalue: beta must be >= 0");
    return -2.0 * beta * beta;
}

double halfplane_threshold(double beta) {
    if (beta <= 0) throw std::invalid_argument("halfplane_threshold: beta must be positive");
    return -beta * beta;
}

} // namespace robin
