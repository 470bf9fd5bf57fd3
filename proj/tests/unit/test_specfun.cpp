#include "cornerspec/specfun.hpp"

#include "cornerspec/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace cornerspec;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kStokesAngle = kPi / 3.0;
const double kStokesRho = std::sqrt(3.0) / 2.0;
} // namespace

TEST_SUITE_BEGIN("fast");

TEST_CASE("solve_kappa: Stokes corner value and degenerate limits")
{
    const double k = solve_kappa(kStokesAngle, kStokesRho);
    CHECK(k > 1.065);
    CHECK(k < 1.075);
    CHECK(std::abs(k * std::tanh(k * kStokesAngle) - kStokesRho) <= 1e-12 * kStokesRho);

    // rho0 -> 0+ forces kappa -> 0 (kappa^2 * alpha_star ~ rho0)
    CHECK(solve_kappa(1.0, 1e-10) < 2e-5);

    CHECK_THROWS_AS(solve_kappa(0.0, 1.0), InvalidParameterError);
    CHECK_THROWS_AS(solve_kappa(1.0, -1.0), InvalidParameterError);
    CHECK_THROWS_AS(solve_kappa(kPi, 1.0), InvalidParameterError);
}

TEST_CASE("solve_kappa: matches the bisection oracle")
{
    const double a = kPi / 2.0, r = 1.0;
    const double ref = oracles::bisect(
        [&](double k) { return k * std::tanh(k * a) - r; }, 0.0, 10.0, 1e-14);
    CHECK(std::abs(solve_kappa(a, r) - ref) <= 2e-13);
}

TEST_CASE("solve_mu: Stokes corner, small-rho limit, bisection oracle")
{
    const double mu1 = solve_mu(kStokesAngle, kStokesRho, 1);
    CHECK(mu1 > 2.65);
    CHECK(mu1 < 2.75);
    CHECK(mu1 > 1.0); // admissibility holds at the Stokes corner

    // rho0 -> 0+ pushes mu_k to k*pi/alpha_star from below
    const double a = 1.1;
    CHECK(std::abs(solve_mu(a, 1e-10, 3) - 3.0 * kPi / a) < 1e-4);

    // independent bisection on the mandated branch
    const double a2 = kPi / 2.0, r2 = 0.5;
    const int k = 2;
    const double lo = ((k - 1) * kPi + kPi / 2.0) / a2 + 1e-9;
    const double hi = k * kPi / a2 - 1e-12;
    const double ref = oracles::bisect(
        [&](double m) { return m * std::tan(m * a2) + r2; }, lo, hi, 1e-14);
    CHECK(std::abs(solve_mu(a2, r2, k) - ref) <= 2e-13);

    CHECK_THROWS_AS(solve_mu(1.0, 1.0, 0), InvalidParameterError);
}

TEST_CASE("root residuals and branch discipline over random corners")
{
    std::mt19937 rng(20240601u);
    std::uniform_real_distribution<double> angle(0.1, kPi - 0.1);
    std::uniform_real_distribution<double> rho(0.01, 10.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const double a = angle(rng);
        const double r = rho(rng);
        const double k = solve_kappa(a, r);
        CHECK(std::abs(k * std::tanh(k * a) - r) <= 1e-12 * r);
        const int branch = 1 + trial % 4;
        const double mu = solve_mu(a, r, branch);
        CHECK(std::abs(mu * std::tan(mu * a) + r) <= 1e-10 * std::max(1.0, r));
        const double x = mu * a;
        CHECK(x > (branch - 1) * kPi + kPi / 2.0);
        CHECK(x < branch * kPi);
    }
}

TEST_CASE("gamma_phase: limits, modulus identity, series oracle")
{
    CHECK(std::abs(gamma_phase(1e-8)) < 1e-7); // Gamma(1) = 1

    for (double k : {0.01, 0.05, 0.2, 1.07, 3.0, 10.0, 20.0}) {
        const auto lg = log_gamma(std::complex<double>(1.0, k));
        const double mod2 = std::exp(2.0 * lg.real());
        const double expected = kPi * k / std::sinh(kPi * k);
        CHECK(std::abs(mod2 - expected) <= 1e-12 * expected);
        if (k <= 10.0) {
            const double ref = static_cast<double>(oracles::arg_gamma_series(k));
            CHECK(std::abs(gamma_phase(k) - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
        }
    }
    CHECK_THROWS_AS(gamma_phase(0.0), InvalidParameterError);
}

TEST_CASE("make_corner_data: Stokes fingerprint and admissibility gate")
{
    const CornerData c = make_corner_data(kStokesAngle, kStokesRho, 0.8, 4, 0.5);
    CHECK(std::abs(c.kappa * std::tanh(c.kappa * c.alpha_star) - c.rho0) <= 1e-12 * c.rho0);
    REQUIRE(c.mu.size() == 4);
    for (std::size_t i = 0; i + 1 < c.mu.size(); ++i)
        CHECK(c.mu[i] < c.mu[i + 1]);
    CHECK(c.mu[0] > 1.0);
    CHECK(c.gamma == doctest::Approx(0.8).epsilon(1e-15));
    // gamma reduced mod pi into [0, pi)
    CHECK(make_corner_data(kStokesAngle, kStokesRho, 0.8 + 3 * kPi).gamma ==
          doctest::Approx(0.8).epsilon(1e-12));

    // a wide blunt corner with strong Robin coefficient fails admissibility
    CHECK_THROWS_AS(make_corner_data(3.0, 5.0, 0.0), InvalidParameterError);
}

TEST_CASE("besselK_imag: asymptotic regimes and reference value")
{
    const double kappa = 1.07;
    const double gk = gamma_phase(kappa);

    // large z: K ~ sqrt(pi/2z) e^{-z}
    {
        const double z = 50.0;
        const double lead = std::sqrt(kPi / (2.0 * z)) * std::exp(-z);
        CHECK(std::abs(besselK_imag(kappa, z) / lead - 1.0) < 0.03);
    }
    // small z: K -> -A sin(kappa ln(z/2) - gamma_kappa)
    {
        const double z = 1e-6;
        const double A = std::sqrt(kPi / (kappa * std::sinh(kPi * kappa)));
        const double expected = -A * std::sin(kappa * std::log(0.5 * z) - gk);
        CHECK(std::abs(besselK_imag(kappa, z) - expected) < 1e-6);
    }
    // reference value at z = 1, kappa = 1 against extended-precision quadrature
    {
        const double ref = static_cast<double>(oracles::besselK_quadrature(1.0L, 1.0L));
        CHECK(std::abs(besselK_imag(1.0, 1.0) - ref) <= 1e-11);
    }
    CHECK_THROWS_AS(besselK_imag(1.07, 0.0), DomainError);
    CHECK_THROWS_AS(besselK_imag(1.07, -2.0), DomainError);
    CHECK(besselK_imag(1.07, 700.0) > 0.0);
    CHECK(besselK_imag(1.07, 710.0) == 0.0); // documented underflow
}

TEST_CASE("besselI_imag_real: small-z phase law and large-z growth")
{
    const double kappa = 1.07;
    const double gk = gamma_phase(kappa);
    {
        const double z = 1e-6;
        const double amp = std::sqrt(std::sinh(kPi * kappa) / (kPi * kappa));
        const double expected = amp * std::cos(kappa * std::log(0.5 * z) - gk);
        CHECK(std::abs(besselI_imag_real(kappa, z) - expected) < 1e-6);
    }
    {
        // growth follows e^z / sqrt(2 pi z); the sqrt(2 pi z) e^z reading is
        // off by the factor 2 pi z and would fail this bound by ~188x
        const double z = 30.0;
        const double lead = std::exp(z) / std::sqrt(2.0 * kPi * z);
        CHECK(std::abs(besselI_imag_real(kappa, z) / lead - 1.0) < 0.05);
    }
    CHECK_THROWS_AS(besselI_imag_real(1.07, 800.0), OverflowError);
    CHECK_THROWS_AS(besselI_imag_real_deriv(1.07, 800.0), OverflowError);
    CHECK_THROWS_AS(besselI_imag_real(1.07, 0.0), DomainError);
}

TEST_CASE("Wronskian Itilde K' - Itilde' K = -1/z")
{
    const double kappa = 1.07;
    for (double z : {0.1, 1.0, 10.0}) {
        const double w = besselI_imag_real(kappa, z) * besselK_imag_deriv(kappa, z) -
                         besselI_imag_real_deriv(kappa, z) * besselK_imag(kappa, z);
        CHECK(std::abs(w + 1.0 / z) <= 1e-9 / z);
    }
}

TEST_CASE("bessel derivative sign and finite-difference oracle")
{
    const double kappa = 1.07;
    // monotone-decay regime (below it K oscillates in log z and K' changes sign)
    for (double z : {0.5, 1.0, 2.0, 5.0, 20.0, 100.0, 500.0})
        CHECK(besselK_imag_deriv(kappa, z) < 0.0);

    const double z = 2.0, h = 1e-5;
    const double fd = (besselK_imag(kappa, z + h) - besselK_imag(kappa, z - h)) / (2.0 * h);
    CHECK(std::abs(besselK_imag_deriv(kappa, z) - fd) <= 1e-7);

    const double fdI =
        (besselI_imag_real(kappa, z + h) - besselI_imag_real(kappa, z - h)) / (2.0 * h);
    CHECK(std::abs(besselI_imag_real_deriv(kappa, z) - fdI) <= 1e-7);
}

TEST_CASE("bessel cross-regime consistency on overlap windows")
{
    for (double kappa : {0.4, 1.07, 2.5}) {
        for (double z : {0.3, 1.0, 2.0, 4.0}) {
            const double a = bessel_routes::K_series(kappa, z);
            const double b = bessel_routes::K_integral(kappa, z);
            CHECK(std::abs(a / b - 1.0) <= 1e-8);
        }
        for (double z : {120.0, 200.0, 340.0, 500.0}) {
            const double a = bessel_routes::K_asymptotic(kappa, z);
            const double b = bessel_routes::K_integral(kappa, z);
            CHECK(std::abs(a / b - 1.0) <= 1e-8);
        }
        for (double z : {150.0, 300.0, 600.0}) {
            const double a = bessel_routes::I_asymptotic(kappa, z);
            const double b = bessel_routes::I_series(kappa, z);
            CHECK(std::abs(a / b - 1.0) <= 1e-8);
        }
    }
}

TEST_SUITE_END();
