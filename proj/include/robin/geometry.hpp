#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace robin {

struct Vec2 {
    double x = 0;
    double y = 0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double c, Vec2 a) { return {c * a.x, c * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

enum class CurveFamily {
    line,
    line_bump,
    wedge_smoothed,
    parabola,
    circle,
    graph_bump,
    from_curvature,
    parallel,
};

enum class CurveTopology { infinite_line, closed_loop };

enum class TubeSide { interior, exterior };

/// Curvature profile for curves defined by their signed curvature. `deriv`
/// and `deriv2` may be empty; central differences are used as a fallback.
/// `turning` is an optional closed form for the tangent angle.
struct CurvatureProfile {
    std::string name;
    std::function<double(double)> value;
    std::function<double(double)> deriv;
    std::function<double(double)> deriv2;
    std::function<double(double)> turning;
};

/// Arc-length parametrized planar boundary curve. The domain lies to the
/// left of the curve in the direction of increasing parameter. Infinite
/// curves live on a truncation window [-window, window] and continue as
/// straight tangent rays beyond it; evaluation far outside the extended
/// window is a domain error. Closed loops wrap periodically.
class BoundaryCurve {
public:
    Vec2 point(double s) const;
    Vec2 tangent(double s) const;            // unit
    Vec2 second_derivative(double s) const;  // curvature * left normal
    double tangent_angle(double s) const;
    double curvature(double s) const;
    double curvature_deriv(double s) const;
    double curvature_deriv2(double s) const;

    CurveFamily family() const;
    CurveTopology topology() const;
    double perimeter() const;  // closed loops only
    double window() const;     // infinite curves: parameter window half-width
    std::string descriptor() const;

    /// Graph-type curves expose the height function y = h(x).
    bool is_graph() const;
    double graph_height(double x) const;
    double graph_slope(double x) const;

    /// Smoothed wedges report the half opening angle of the domain.
    std::optional<double> wedge_half_angle() const;

    /// Same trace, opposite parameter direction; negates the curvature.
    BoundaryCurve reversed() const;

    static BoundaryCurve line(double window = 40.0);
    static BoundaryCurve circle(double radius);
    static BoundaryCurve parabola(double window = 120.0);
    /// Curvature amplitude*(sech(s) - sech(s - separation)); zero net turning.
    static BoundaryCurve line_bump(double amplitude = 1.0, double separation = 8.0,
                                   double window = 24.0);
    /// Domain opening half-angle in (0, pi/2); corner replaced by a
    /// polynomial fillet of half-width `fillet`.
    static BoundaryCurve wedge_smoothed(double half_angle, double fillet = 1.0,
                                        double window = 40.0);
    /// Graph y = amplitude * exp(-(x/width)^2) over the line.
    static BoundaryCurve graph_bump(double amplitude, double width = 1.0,
                                    double window = 30.0);
    static BoundaryCurve from_curvature(CurvatureProfile profile, double window,
                                        double anchor = 0.0);
    /// Closed curve from a periodic curvature profile on [0, length];
    /// validates closure of position and tangent.
    static BoundaryCurve from_curvature_closed(CurvatureProfile profile, double length);
    /// Parallel curve at normal distance `offset` on the interior side,
    /// reparametrized by its own arc length.
    static BoundaryCurve parallel_offset(const BoundaryCurve& base, double offset);

    struct Impl;  // definition in geometry.cpp

private:
    explicit BoundaryCurve(std::shared_ptr<const Impl> impl);
    std::shared_ptr<const Impl> impl_;
};

/// Normal offset map: interior side (s,u) -> Gamma + u * left normal,
/// exterior side uses the right normal.
Vec2 tube_map(const BoundaryCurve& curve, double s, double u, TubeSide side);

/// Curvature of the parallel curve at normal distance `offset`:
/// gamma / (1 - offset*gamma). Throws SingularCoordinatesError when
/// offset*gamma >= 1.
double parallel_curvature(double gamma, double offset);

struct CurvatureStats {
    double gamma_max = 0;             // max of signed curvature
    double gamma_min = 0;             // min of signed curvature
    double gamma_abs_max = 0;         // max |gamma|
    double gamma_deriv_abs_max = 0;   // max |gamma'|
    double gamma_deriv2_abs_max = 0;  // max |gamma''|
    double s_at_max = 0;              // a location of the curvature maximum
    double decay_exponent_fit = 0;    // log|gamma| vs log<s> slope, outer half
    bool flat = false;                // gamma identically zero on the window
};

CurvatureStats curvature_stats(const BoundaryCurve& curve, double s_min, double s_max,
                               int n_samples = 4096);

struct AssumptionReport {
    bool injective = false;
    double tube_halfwidth_limit = 0;  // estimated largest admissible width
    bool decay_ok = false;
    double min_tube_distance = 0;     // sampled min distance of far-apart tube points
    CurvatureStats stats;
};

/// Checks the tube of width `a` on the given side: local criterion
/// a*max|gamma| < 1 plus a sampled self-intersection test of the tube
/// boundary (pairs separated by more than 3a in arc length).
AssumptionReport check_assumptions(const BoundaryCurve& curve, double a,
                                   int n_samples = 1024,
                                   TubeSide side = TubeSide::interior);

/// Builds a curve from the JSON object {"family": ..., parameters...}.
/// Unknown keys are rejected with std::invalid_argument.
BoundaryCurve curve_from_json(const std::string& json_text);

} // namespace robin
