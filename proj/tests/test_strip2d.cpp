#include <doctest.h>

#include "robin/comparison1d.hpp"
#include "robin/errors.hpp"
#include "robin/exact_models.hpp"
#include "robin/strip2d.hpp"
#include "robin/transverse1d.hpp"

#include <cmath>
#include <numbers>

using namespace robin;
namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("effective potential") {
    SUBCASE("vanishes for straight boundaries") {
        auto line = BoundaryCurve::line(40.0);
        CHECK(effective_potential(line, 1.0, 0.3, TubeSide::interior) == 0.0);
        CHECK(effective_potential(line, -2.0, 0.1, TubeSide::exterior) == 0.0);
    }
    SUBCASE("circle exterior at the wall keeps only the curvature term") {
        auto circ = BoundaryCurve::circle(1.0);
        CHECK(effective_potential(circ, 0.7, 0.0, TubeSide::exterior) ==
              doctest::Approx(-0.25).epsilon(1e-12));
        CHECK(effective_potential(circ, 0.7, 0.0, TubeSide::interior) ==
              doctest::Approx(-0.25).epsilon(1e-12));
    }
    SUBCASE("closed form matches the divergence-form route") {
        // V = Vtilde - d/ds[u gamma'/(2 jac^3)] - d/du[gamma/(2 jac)], evaluated
        // here by finite differences of the bracketed terms.
        auto bump = BoundaryCurve::line_bump();
        auto jac = [&bump](double s, double u) { return 1.0 - u * bump.curvature(s); };
        auto term_s = [&](double s, double u) {
            const double j = jac(s, u);
            return u * bump.curvature_deriv(s) / (2.0 * j * j * j);
        };
        auto term_u = [&](double s, double u) {
            return bump.curvature(s) / (2.0 * jac(s, u));
        };
        auto v_indep = [&](double s, double u) {
            const double j = jac(s, u);
            const double g = bump.curvature(s), g1 = bump.curvature_deriv(s);
            const double vt = 0.25 * g * g / (j * j) +
                              0.25 * u * u * g1 * g1 / (j * j * j * j);
            const double h = 1e-5;
            const double ds = (term_s(s + h, u) - term_s(s - h, u)) / (2 * h);
            const double du = (term_u(s, u + h) - term_u(s, u - h)) / (2 * h);
            return vt - ds - du;
        };
        auto st = curvature_stats(bump, -12.0, 12.0, 2048);
        for (double s : {st.s_at_max, 0.5, 2.0, 7.6}) {
            for (double u : {0.0, 0.1, 0.3}) {
                CHECK(effective_potential(bump, s, u, TubeSide::interior) ==
                      doctest::Approx(v_indep(s, u)).epsilon(1e-6));
            }
        }
    }
    SUBCASE("exterior sign convention is the interior one with gamma negated") {
        auto bump = BoundaryCurve::line_bump();
        auto rev = bump.reversed();
        for (double s : {-3.0, 0.2, 5.0}) {
            CHECK(effective_potential(bump, s, 0.2, TubeSide::exterior) ==
                  doctest::Approx(effective_potential(rev, -s, 0.2, TubeSide::interior))
                      .epsilon(1e-10));
        }
    }
    SUBCASE("singular coordinates are reported") {
        auto circ = BoundaryCurve::circle(1.0);
        CHECK_THROWS_AS(effective_potential(circ, 0.0, 1.0, TubeSide::interior),
                        SingularCoordinatesError);
    }
}

TEST_CASE("straight strip separates: transverse ground + longitudinal floor") {
    StripModel m{BoundaryCurve::line(40.0)};
    m.side = StripSide::domain_interior;
    m.width = 1.2;
    m.beta = 5.0;
    m.far = FarBC::dirichlet;
    m.s_trunc = 8.0;
    m.n_s = 128;
    m.n_u = 48;
    Spectrum s = solve_strip(m, 1);
    const double expect = dirichlet_far_ground(1.2, 5.0) + std::pow(pi / 16.0, 2);
    CHECK(s.values[0] == doctest::Approx(expect).epsilon(1e-3));
    CHECK(s.residuals[0] <= 1e-8);
}

TEST_CASE("straight waveguide reproduces the double-Robin decay rate") {
    StripModel m{BoundaryCurve::line(200.0)};
    m.side = StripSide::waveguide;
    m.width = 1.0;
    m.beta = 1.0;
    m.s_trunc = 60.0;
    m.n_s = 240;
    m.n_u = 64;
    Spectrum s = solve_strip(m, 1);
    const double kappa = waveguide_decay_rate(1.0, 1.0);
    const double expect = -kappa * kappa + std::pow(pi / 120.0, 2);
    CHECK(s.values[0] == doctest::Approx(expect).epsilon(5e-4));
}

TEST_CASE("disc exterior strip against the Bessel spectral condition") {
    SUBCASE("0.5% agreement at beta = 8 on a modest mesh") {
        StripModel m{BoundaryCurve::circle(1.0)};
        m.side = StripSide::obstacle_exterior;
        m.beta = 8.0;
        m.width = 3.0 * std::log(8.0) / 8.0;
        m.n_s = 256;
        m.n_u = 64;
        m.far = FarBC::dirichlet;
        Spectrum s = solve_strip(m, 5);
        const double e0 = disc_exterior_eigenvalue(1.0, 8.0, 0).eigenvalue;
        const double e1 = disc_exterior_eigenvalue(1.0, 8.0, 1).eigenvalue;
        const double e2 = disc_exterior_eigenvalue(1.0, 8.0, 2).eigenvalue;
        CHECK(std::abs(s.values[0] - e0) / std::abs(e0) < 5e-3);
        CHECK(std::abs(s.values[1] - e1) / std::abs(e1) < 5e-3);
        CHECK(std::abs(s.values[2] - e1) / std::abs(e1) < 5e-3);  // m = 1 is double
        CHECK(std::abs(s.values[3] - e2) / std::abs(e2) < 5e-3);
        CHECK(std::abs(s.values[4] - e2) / std::abs(e2) < 5e-3);
        // exterior threshold: every bound state is negative and discrete
        Spectrum cls = classify_discrete(std::move(s), strip_threshold(m), 0.0);
        for (bool f : cls.discrete_flags) CHECK(f);
    }
    SUBCASE("enclosure contains the exact value in the wide-bracket regime") {
        // at small beta the Dirichlet/Neumann far-wall gap dominates the mesh
        // error, so the discrete enclosure genuinely contains the true value
        StripModel m{BoundaryCurve::circle(1.0)};
        m.side = StripSide::obstacle_exterior;
        m.beta = 2.0;
        m.width = 1.0;
        m.n_s = 192;
        m.n_u = 48;
        BracketResult br = bracket_eigenvalues(m, 1);
        const double exact = disc_exterior_eigenvalue(1.0, 2.0, 0).eigenvalue;
        CHECK(br.lower[0] <= exact);
        CHECK(exact <= br.upper[0]);
    }
}

TEST_CASE("bracketing order and discreteness for the deformed line") {
    StripModel m{BoundaryCurve::line_bump()};
    m.side = StripSide::domain_interior;
    m.beta = 10.0;
    m.width = 3.0 * std::log(10.0) / 10.0;
    m.s_trunc = 12.0;
    m.n_s = 256;
    m.n_u = 48;
    BracketResult br = bracket_eigenvalues(m, 3);
    for (int j = 0; j < 3; ++j) CHECK(br.lower[j] <= br.upper[j] + 1e-7);
    CHECK(br.upper[0] < -100.0);  // bound state below the halfplane threshold
    CHECK(br.separated_available);
    // guaranteed orderings of the separated machinery
    CHECK(br.refined_lower[0] >= br.separated.lower[0] - 1e-7);
    CHECK(br.lower[0] >= br.separated.lower[0] - 1e-7);
    CHECK(br.lower_slack >= 0.0);
    CHECK(br.refined_gap >= 0.0);
    CHECK(br.mu[0] < 0.0);
}

TEST_CASE("separated bounds collapse to the transverse values for gamma = 0") {
    StripModel m{BoundaryCurve::line(40.0)};
    m.side = StripSide::domain_interior;
    m.beta = 6.0;
    m.width = 0.5;
    m.s_trunc = 40.0;
    m.n_s = 512;
    SeparatedBounds sb = separated_bounds(m, 1);
    const double floor = std::pow(pi / 80.0, 2);
    CHECK(sb.zeta_dirichlet == doctest::Approx(dirichlet_far_ground(0.5, 6.0)).epsilon(1e-10));
    CHECK(sb.zeta_neumann == doctest::Approx(robin_far_ground(0.5, 6.0, 0.0)).epsilon(1e-10));
    CHECK(sb.upper[0] == doctest::Approx(sb.zeta_dirichlet + floor).epsilon(1e-4));
    CHECK(sb.lower[0] == doctest::Approx(sb.zeta_neumann + floor).epsilon(1e-4));
}

TEST_CASE("longitudinal shift of the separated operators is linear in the width") {
    // |mu_1^{D}(a) - mu_1| <= C a: successive halvings of a halve the gap
    auto bump = BoundaryCurve::line_bump();
    Comparison1DProblem cmp;
    cmp.gamma = [&bump](double s) { return bump.curvature(s); };
    cmp.periodic = false;
    cmp.extent = 40.0;
    cmp.n = 2048;
    const double mu1 = mu_eigenvalues(cmp, 1).values[0];
    auto gap = [&](double a) {
        StripModel m{bump};
        m.side = StripSide::domain_interior;
        m.beta = 20.0;
        m.width = a;
        m.s_trunc = 40.0;
        m.n_s = 2048;
        return std::abs(separated_bounds(m, 1).mu_dirichlet[0] - mu1);
    };
    const double g2 = gap(0.2), g1 = gap(0.1), g05 = gap(0.05);
    CHECK(g2 / g1 > 1.6);
    CHECK(g2 / g1 < 2.6);
    CHECK(g1 / g05 > 1.6);
    CHECK(g1 / g05 < 2.6);
}

TEST_CASE("separated bounds regime guard") {
    StripModel m{BoundaryCurve::line_bump()};
    m.side = StripSide::domain_interior;
    m.beta = 5.0;
    m.width = 0.6;  // above 1/(2 gamma_plus) ~ 0.5
    m.s_trunc = 12.0;
    CHECK_THROWS_AS(separated_bounds(m, 1), RegimeError);
}

TEST_CASE("concavity check") {
    SUBCASE("halfplane: threshold is exactly -beta^2") {
        StripModel m{BoundaryCurve::line(40.0)};
        m.side = StripSide::domain_interior;
        m.beta = 5.0;
        m.width = 1.2;
        m.s_trunc = 12.0;
        m.n_s = 192;
        m.n_u = 48;
        ConcavityReport rep = concavity_check(m);
        CHECK(rep.empty_discrete);
        CHECK(rep.lowest == doctest::Approx(-25.0).epsilon(2e-2));
    }
    SUBCASE("concave profile passes, convex bump fails") {
        CurvatureProfile neg{"negative_lorentzian",
                             [](double s) { return -1.0 / (1.0 + s * s); }, nullptr, nullptr,
                             nullptr};
        StripModel m{BoundaryCurve::from_curvature(neg, 40.0)};
        m.side = StripSide::domain_interior;
        m.beta = 5.0;
        m.width = 1.2;
        m.s_trunc = 12.0;
        m.n_s = 192;
        m.n_u = 48;
        CHECK(concavity_check(m).empty_discrete);

        CurvatureProfile sech{"sech", [](double s) { return 1.0 / std::cosh(s); }, nullptr,
                              nullptr, nullptr};
        StripModel c{BoundaryCurve::from_curvature(sech, 40.0)};
        c.side = StripSide::domain_interior;
        c.beta = 10.0;
        c.width = 0.8;
        c.s_trunc = 12.0;
        c.n_s = 256;
        c.n_u = 64;
        CHECK_THROWS_AS(concavity_check(c), RegimeError);  // positive curvature
        ConcavityReport rep = concavity_check(c, 1e-2, /*allow_convex=*/true);
        CHECK_FALSE(rep.empty_discrete);
        CHECK(rep.lowest < -100.0);
    }
}

TEST_CASE("mesh refinement signature is second order") {
    auto lowest = [](int ns, int nu) {
        StripModel m{BoundaryCurve::line_bump()};
        m.side = StripSide::domain_interior;
        m.beta = 10.0;
        m.width = 0.5;
        m.far = FarBC::dirichlet;
        m.s_trunc = 10.0;
        m.n_s = ns;
        m.n_u = nu;
        return solve_strip(m, 1).values[0];
    };
    const double l1 = lowest(64, 16), l2 = lowest(128, 32), l3 = lowest(256, 64);
    // min-max: refinement on nested spaces never raises the Ritz value
    CHECK(l2 <= l1 + 1e-9);
    CHECK(l3 <= l2 + 1e-9);
    // and the convergence is near second order
    const double change1 = l1 - l2, change2 = l2 - l3;
    CHECK(change1 <= 6.0 * change2);
}

TEST_CASE("model validation") {
    StripModel m{BoundaryCurve::circle(1.0)};
    m.side = StripSide::domain_interior;  // interior side needs an infinite curve
    CHECK_THROWS_AS(assemble_strip(m), std::invalid_argument);

    StripModel w{BoundaryCurve::line_bump()};
    w.side = StripSide::obstacle_exterior;  // exterior side needs a closed curve
    CHECK_THROWS_AS(assemble_strip(w), std::invalid_argument);

    StripModel s{BoundaryCurve::line_bump()};
    s.side = StripSide::domain_interior;
    s.width = 1.5;  // width * max|gamma| >= 1
    CHECK_THROWS_AS(assemble_strip(s), SingularCoordinatesError);

    StripModel c{BoundaryCurve::line(40.0)};
    c.side = StripSide::domain_interior;
    c.n_s = 4;  // mesh too coarse
    CHECK_THROWS_AS(assemble_strip(c), std::invalid_argument);
}

TEST_CASE("waveguide threshold uses the strip decay rate") {
    StripModel m{BoundaryCurve::line(40.0)};
    m.side = StripSide::waveguide;
    m.width = 1.0;
    m.beta = 10.0;
    const double kappa = waveguide_decay_rate(1.0, 10.0);
    CHECK(strip_threshold(m) == doctest::Approx(-kappa * kappa));
    m.side = StripSide::domain_interior;
    CHECK(strip_threshold(m) == doctest::Approx(-100.0));
}
