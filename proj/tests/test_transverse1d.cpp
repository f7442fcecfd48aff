#include <doctest.h>

#include "robin/errors.hpp"
#include "robin/transverse1d.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace robin;
namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("Robin-Dirichlet ground state") {
    SUBCASE("sandwich at a=2, sigma0=10") {
        const double z = dirichlet_far_ground(2.0, 10.0);
        CHECK(z >= -100.0);
        CHECK(z <= -100.0 + 400.0 * std::exp(-20.0));
    }
    SUBCASE("halfline limit: large a*sigma0 saturates at -sigma0^2") {
        const double z = dirichlet_far_ground(40.0, 2.0);
        CHECK(z == doctest::Approx(-4.0).epsilon(1e-12));
    }
    SUBCASE("finite-difference oracle at a=1, sigma0=2") {
        const double z = dirichlet_far_ground(1.0, 2.0);
        const double fd = oracles::fd_interval_lowest_rich(1.0, 2.0, FarBC::dirichlet, 0, 512);
        CHECK(z == doctest::Approx(fd).epsilon(1e-6));
    }
    SUBCASE("uniqueness regime is enforced") {
        CHECK_THROWS_AS(dirichlet_far_ground(1.0, 1.0), RegimeError);  // a*sigma0 = 1 < 4/3
        CHECK_THROWS_AS(dirichlet_far_ground(1.0, -1.0), std::invalid_argument);
    }
}

TEST_CASE("Robin-Robin ground state") {
    SUBCASE("sandwich at a=2, sigma0=10, sigma_far=0.3") {
        const double z = robin_far_ground(2.0, 10.0, 0.3);
        CHECK(z >= -100.0 - 1125.0 * std::exp(-20.0));
        CHECK(z <= -100.0);
    }
    SUBCASE("Neumann far end lies below the Dirichlet one") {
        const double zn = robin_far_ground(2.0, 10.0, 0.0);
        const double zd = dirichlet_far_ground(2.0, 10.0);
        CHECK(zn <= zd + 1e-12);
    }
    SUBCASE("finite-difference oracle at a=1, sigma0=5, sigma_far=-0.2") {
        const double z = robin_far_ground(1.0, 5.0, -0.2);
        const double fd =
            oracles::fd_interval_lowest_rich(1.0, 5.0, FarBC::robin, -0.2, 512);
        CHECK(z == doctest::Approx(fd).epsilon(1e-6));
    }
    SUBCASE("regime enforcement") {
        // sigma0 below 2 log5 / (3 a)
        CHECK_THROWS_AS(robin_far_ground(1.0, 1.0, 0.0), RegimeError);
        // sigma0 below |sigma_far|
        CHECK_THROWS_AS(robin_far_ground(1.0, 2.0, -3.0), RegimeError);
    }
}

TEST_CASE("randomized sandwiches and transcendental-vs-FD agreement") {
    std::mt19937_64 gen(2024);
    auto uni = [&gen](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(gen() >> 11) * 0x1.0p-53);
    };
    for (int trial = 0; trial < 100; ++trial) {
        const double a = uni(0.5, 2.5);
        const double sig_far = uni(-1.5, 1.5);
        const double floor =
            std::max({4.0 / (3.0 * a), std::abs(sig_far), 2.0 * std::log(5.0) / (3.0 * a)});
        const double sigma0 = uni(floor * 1.15, floor * 1.15 + 6.0);
        const double slack = sigma0 * sigma0 * std::exp(-a * sigma0);

        const double zd = dirichlet_far_ground(a, sigma0);
        CHECK(zd >= -sigma0 * sigma0 - 1e-9);
        CHECK(zd <= -sigma0 * sigma0 + 4.0 * slack + 1e-9);

        const double zn = robin_far_ground(a, sigma0, sig_far);
        CHECK(zn <= -sigma0 * sigma0 + 1e-9);
        CHECK(zn >= -sigma0 * sigma0 - 11.25 * slack - 1e-9);

        CHECK(zn <= zd + 1e-12);

        if (trial % 10 == 0) {  // FD cross-checks are the slow part
            const double fd_d =
                oracles::fd_interval_lowest_rich(a, sigma0, FarBC::dirichlet, 0, 768);
            CHECK(zd == doctest::Approx(fd_d).epsilon(1e-6));
            const double fd_n =
                oracles::fd_interval_lowest_rich(a, sigma0, FarBC::robin, sig_far, 768);
            CHECK(zn == doctest::Approx(fd_n).epsilon(1e-6));
        }
    }
}

TEST_CASE("Robin-Neumann decay rate of the truncated halfline") {
    SUBCASE("frozen oracle value at beta=1, b=1") {
        // bisection of (zeta-beta)/(zeta+beta) = exp(-2 zeta b)
        const double z = robin_neumann_decay_rate(1.0, 1.0);
        CHECK(z == doctest::Approx(1.19967864025773).epsilon(1e-10));
        // cross-check: -zeta^2 against the FD Robin-Neumann interval
        const double fd = oracles::fd_interval_lowest_rich(1.0, 1.0, FarBC::neumann, 0, 512);
        CHECK(-z * z == doctest::Approx(fd).epsilon(1e-6));
    }
    SUBCASE("wide interval saturates at beta") {
        CHECK(std::abs(robin_neumann_decay_rate(40.0, 1.0) - 1.0) < 1e-12);
    }
    SUBCASE("doubling the width moves the rate toward beta") {
        const double z1 = robin_neumann_decay_rate(1.0, 1.0);
        const double z2 = robin_neumann_decay_rate(2.0, 1.0);
        CHECK(z2 - 1.0 < z1 - 1.0);
        CHECK(z2 > 1.0);
    }
}

TEST_CASE("straight-duct decay rate") {
    const double kappa = waveguide_decay_rate(1.0, 1.0);
    CHECK(kappa * std::tanh(0.5 * kappa) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kappa > 1.0);
}

TEST_CASE("transverse assembly") {
    SUBCASE("mixed Neumann-Dirichlet interval: (pi/(2a))^2") {
        TransverseProblem p;
        p.width = 1.5;
        p.robin0 = 0.0;
        p.far = FarBC::dirichlet;
        Spectrum s = lowest_eigenpairs(assemble_transverse(p, 1024), 1);
        CHECK(s.values[0] == doctest::Approx(std::pow(pi / 3.0, 2)).epsilon(1e-4));
    }
    SUBCASE("double Robin well: even mode kappa tanh(kappa d/2) = beta") {
        TransverseProblem p;
        p.width = 1.0;
        p.robin0 = 1.0;
        p.far = FarBC::robin;
        p.robin_far = -1.0;  // attractive on both walls
        Spectrum s = lowest_eigenpairs(assemble_transverse(p, 1024), 1);
        const double kappa = waveguide_decay_rate(1.0, 1.0);
        CHECK(s.values[0] == doctest::Approx(-kappa * kappa).epsilon(1e-5));
    }
    SUBCASE("halfline regime: sigma0 = beta, Dirichlet far, large a*beta") {
        TransverseProblem p;
        p.width = 4.0;
        p.robin0 = 3.0;
        p.far = FarBC::dirichlet;
        Spectrum s = lowest_eigenpairs(assemble_transverse(p, 2048), 1);
        CHECK(std::abs(s.values[0] + 9.0) < 8.0 * 9.0 * std::exp(-12.0) + 2e-4);
    }
    SUBCASE("FD convergence rate is second order") {
        auto err = [](int n) {
            const double exact = dirichlet_far_ground(1.0, 4.0);
            return std::abs(oracles::fd_interval_lowest(1.0, 4.0, FarBC::dirichlet, 0, n) -
                            exact);
        };
        const double e256 = err(256), e512 = err(512), e1024 = err(1024);
        CHECK(e256 / e512 > 2.0);
        CHECK(e256 / e512 < 8.0);
        CHECK(e512 / e1024 > 2.0);
        CHECK(e512 / e1024 < 8.0);
    }
    SUBCASE("validation") {
        TransverseProblem p;
        CHECK_THROWS_AS(assemble_transverse(p, 8), std::invalid_argument);
        p.width = -1.0;
        CHECK_THROWS_AS(assemble_transverse(p, 64), std::invalid_argument);
    }
}
