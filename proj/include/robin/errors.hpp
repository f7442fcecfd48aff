#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace robin {

/// Precondition violated: the requested regime is outside the one where the
/// computed quantity is well defined (e.g. no unique negative eigenvalue).
class RegimeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Curvilinear coordinates degenerate: the Jacobian factor 1 -/+ u*gamma
/// vanishes or changes sign inside the strip.
class SingularCoordinatesError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Mass matrix is not symmetric positive definite.
class DefinitenessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Iterative eigensolver failed to certify the requested residual tolerance.
/// Carries the best residuals reached so callers can report them.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::vector<double> residuals)
        : std::runtime_error(what), best_residuals(std::move(residuals)) {}
    std::vector<double> best_residuals;
};

/// Function value over/underflows the double range for the requested argument.
class RangeError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace robin
