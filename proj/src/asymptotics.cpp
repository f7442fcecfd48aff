#include "robin/asymptotics.hpp"

#include "robin/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace robin {

double predict_interior(double gamma_max, double beta) {
    if (beta <= 0) throw std::invalid_argument("predict_interior: beta must be positive");
    return -beta * beta - gamma_max * beta;
}

double predict_exterior(double gamma_min_ext, double beta) {
    if (beta <= 0) throw std::invalid_argument("predict_exterior: beta must be positive");
    return -beta * beta + gamma_min_ext * beta;
}

double predict_refined_lower(double gamma_extremum, double mu_j, double beta,
                             ProblemSide side) {
    if (beta <= 0) throw std::invalid_argument("predict_refined_lower: beta must be positive");
    const double sigma = side == ProblemSide::interior ? beta + 0.5 * gamma_extremum
                                                       : beta - 0.5 * gamma_extremum;
    return -sigma * sigma + mu_j;
}

double predict_waveguide(double gamma_max, double gamma_parallel_min, double beta) {
    if (beta <= 0) throw std::invalid_argument("predict_waveguide: beta must be positive");
    return -beta * beta - std::max(gamma_max, -gamma_parallel_min) * beta;
}

ExponentFit fit_remainder_exponent(std::span<const double> betas,
                                   std::span<const double> residuals) {
    if (betas.size() != residuals.size() || betas.size() < 3)
        throw std::invalid_argument("fit_remainder_exponent: need >= 3 matched points");
    ExponentFit out;
    std::vector<double> lx, ly;
    for (size_t i = 0; i < betas.size(); ++i) {
        if (betas[i] <= 0)
            throw std::invalid_argument("fit_remainder_exponent: betas must be positive");
        if (residuals[i] == 0.0) {
            out.degenerate = true;
            return out;
        }
        lx.push_back(std::log(betas[i]));
        ly.push_back(std::log(std::abs(residuals[i])));
    }
    const num::LineFit fit = num::fit_line(lx, ly);
    out.exponent = fit.slope;
    out.r_squared = fit.r_squared;
    return out;
}

} // namespace robin
