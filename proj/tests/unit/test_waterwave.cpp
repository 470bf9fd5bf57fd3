#include "cornerspec/waterwave.hpp"

#include "cornerspec/errors.hpp"
#include "cornerspec/specfun.hpp"
#include "doctest.h"
#include "oracles.hpp"

#include <cmath>

using namespace cornerspec;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_SUITE_BEGIN("fast");

TEST_CASE("tau1_root: bracket, residual, and the mu relation")
{
    const double t1 = tau1_root();
    CHECK(t1 > 1.75);
    CHECK(t1 < 1.85);
    CHECK(std::abs(t1 + std::cos(0.5 * kPi * t1) / std::sin(0.5 * kPi * t1) / std::sqrt(3.0)) <=
          1e-12);

    const double ref = oracles::bisect(
        [](double t) { return t + std::cos(0.5 * kPi * t) / std::sin(0.5 * kPi * t) / std::sqrt(3.0); },
        1.0 + 1e-9, 2.0 - 1e-9, 1e-14);
    CHECK(std::abs(t1 - ref) <= 2e-13);

    // (3/2) tau_1 is the first root of the blunt-corner branch equation
    const double mu1 = solve_mu(kPi / 3.0, 0.5 * std::sqrt(3.0), 1);
    CHECK(std::abs(1.5 * t1 - mu1) <= 1e-10);
}

TEST_CASE("stokes_corner_params: fingerprint values and purity")
{
    const CornerData c = stokes_corner_params(0.8);
    CHECK(c.alpha_star == doctest::Approx(kPi / 3.0).epsilon(1e-15));
    CHECK(c.rho0 == doctest::Approx(0.5 * std::sqrt(3.0)).epsilon(1e-15));
    CHECK(c.kappa > 1.065);
    CHECK(c.kappa < 1.075);
    CHECK(c.mu[0] > 1.0);
    CHECK(c.mu[0] == doctest::Approx(1.5 * tau1_root()).epsilon(1e-10));
    CHECK(std::abs(c.kappa * std::tanh(c.kappa * c.alpha_star) - c.rho0) <= 1e-12 * c.rho0);

    const CornerData c2 = stokes_corner_params(0.8);
    CHECK(c2.kappa == c.kappa);
    CHECK(c2.gamma_kappa == c.gamma_kappa);
}

TEST_CASE("profile_from_expansion: corner slope, invariants, geometry errors")
{
    const SurfaceProfile p = profile_from_expansion(0.25, -0.08, 0.4);
    CHECK(std::abs(p.eta_p(1e-12) + 1.0 / std::sqrt(3.0)) < 1e-5);
    CHECK(std::abs(p.eta_p(0.5 * p.Lambda)) <= 1e-12);
    CHECK(p.eta(1e-9) == doctest::Approx(p.eta0).epsilon(1e-8));
    validate_profile(p);

    // straight-corner degenerate case
    const SurfaceProfile ps = profile_from_expansion(0.0, 0.0, 0.4);
    CHECK(ps.straight_until == doctest::Approx(0.4));
    for (double x : {0.01, 0.1, 0.39})
        CHECK(ps.eta_p(x) == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
    validate_profile(ps);

    // a crest that would dive below the bottom is rejected
    CHECK_THROWS_AS(profile_from_expansion(0.0, 0.0, 0.4, 2.0, 0.2), GeometryError);
    CHECK_THROWS_AS(profile_from_expansion(0.0, 0.0, 2.0), InvalidParameterError);
}

TEST_CASE("rho_coefficient: corner limit and remainder exponent")
{
    const SurfaceProfile p = profile_from_expansion(0.25, -0.08, 0.4);
    const StokesLinearization lin = synthetic_linearization(p, 0.3);
    const ScalarFn rho = rho_coefficient(lin);

    const double rho0 = 0.5 * std::sqrt(3.0);
    CHECK(std::abs(rho(1e-8) - rho0) < 1e-3);
    CHECK(std::abs(rho(1e-10) - rho0) < 1e-4);

    // log-log slope of |rho - rho0| near zero is the Hoelder exponent 1/2
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (double x = 1e-6; x < 1e-3; x *= 2.0) {
        const double lx = std::log(x);
        const double ly = std::log(std::abs(rho(x) - rho0));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(std::abs(slope - 0.5) < 0.1);
}

TEST_CASE("rho_coefficient: flat irrotational sanity and stagnation guard")
{
    // flat surface, constant psi_y, zero vorticity: rho = r / (2 (R - eta))
    SurfaceProfile flat;
    flat.Lambda = 2.0;
    flat.eta0 = 1.0;
    flat.a0 = 0.0;
    flat.eta = [](double) { return 1.0; };
    flat.eta_p = [](double) { return 0.0; };
    flat.eta_pp = [](double) { return 0.0; };
    StokesLinearization lin;
    lin.profile = flat;
    lin.R = 1.5;
    lin.omega_surface = 0.0;
    lin.psi_y = [](double) { return 0.7; };
    const ScalarFn rho = rho_coefficient(lin);
    for (double x : {0.2, 0.5, 0.9}) {
        const double r = x; // eta == eta0, so the crest distance is x itself
        CHECK(rho(x) == doctest::Approx(r / (2.0 * 0.5)).epsilon(1e-14));
    }

    // stagnation: R equal to the surface height away from the crest
    lin.R = 1.0;
    const ScalarFn rho_bad = rho_coefficient(lin);
    CHECK_THROWS_AS(rho_bad(0.3), GeometryError);
}

TEST_SUITE_END();
