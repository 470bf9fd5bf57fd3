#include "cornerspec/model1d.hpp"

#include "cornerspec/errors.hpp"
#include "cornerspec/quadrature.hpp"
#include "cornerspec/specfun.hpp"
#include "doctest.h"

#include <cmath>
#include <vector>

using namespace cornerspec;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

CornerData stokes_corner(double gamma = 0.8)
{
    return make_corner_data(kPi / 3.0, std::sqrt(3.0) / 2.0, gamma, 4, 0.5);
}

double grid_inner(const std::vector<double>& t, const std::vector<double>& a,
                  const std::vector<double>& b)
{
    // trapezoid pairing with weight r dr = e^{2t} dt
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const double w0 = std::exp(2.0 * t[i]);
        const double w1 = std::exp(2.0 * t[i + 1]);
        s += 0.5 * (t[i + 1] - t[i]) * (w0 * a[i] * b[i] + w1 * a[i + 1] * b[i + 1]);
    }
    return s;
}
} // namespace

TEST_SUITE_BEGIN("fast");

TEST_CASE("halfline_ladder: common ratio and phase covariance")
{
    const CornerData c = stokes_corner();
    const HalfLineLadder l = halfline_ladder(c, 0, 4);
    CHECK(l.ratio == doctest::Approx(std::exp(kPi / c.kappa)).epsilon(1e-15));
    for (std::size_t i = 0; i + 1 < l.tau.size(); ++i) {
        CHECK(l.tau[i + 1] / l.tau[i] == doctest::Approx(l.ratio).epsilon(1e-14));
        CHECK(l.tau_doubled[i] == doctest::Approx(2.0 * l.tau[i]).epsilon(1e-15));
    }

    // replacing gamma by gamma' scales every entry by e^{(gamma'-gamma)/kappa}
    const CornerData c2 = stokes_corner(1.4);
    const HalfLineLadder l2 = halfline_ladder(c2, 0, 4);
    const double scale = std::exp((1.4 - 0.8) / c.kappa);
    for (std::size_t i = 0; i < l.tau.size(); ++i)
        CHECK(l2.tau[i] / l.tau[i] == doctest::Approx(scale).epsilon(1e-13));

    // gamma + pi reduces mod pi, which is the one-index shift of the ladder
    const CornerData c3 = stokes_corner(0.8 + kPi);
    const HalfLineLadder l3 = halfline_ladder(c3, 1, 4);
    CHECK(l3.tau[0] == doctest::Approx(l.tau[1]).epsilon(1e-13));

    CHECK_THROWS_AS(halfline_ladder(c, 3, 1), InvalidParameterError);
}

TEST_CASE("interval_Q: exponential smallness and Robin consistency")
{
    const CornerData c = stokes_corner();
    const ScalarFn no_alpha{};

    // |Q| tracks tau^{-2} e^{-2 tau delta}
    {
        const double tau = 100.0, delta = 0.2; // tau*delta = 20
        const double Q = interval_Q(c, tau, delta, no_alpha);
        CHECK(std::abs(Q) * tau * tau * std::exp(40.0) < 1e4);
        CHECK(std::abs(Q) > 0.0);
    }
    // log|Q| + 2 tau delta stays bounded over a sweep of tau*delta
    for (double z = 10.0; z <= 30.0; z += 4.0) {
        const double tau = 80.0;
        const double Q = interval_Q(c, tau, z / tau, no_alpha);
        const double track = std::log(std::abs(Q)) + 2.0 * z;
        CHECK(track > -25.0);
        CHECK(track < 25.0);
    }
    // the closure satisfies the Robin condition by direct substitution
    {
        const double tau = 60.0, delta = 0.25, z = tau * delta;
        const double Q = interval_Q(c, tau, delta, no_alpha);
        const double h = besselK_imag(c.kappa, z) - Q * besselI_imag_real(c.kappa, z);
        const double hp = tau * (besselK_imag_deriv(c.kappa, z) -
                                 Q * besselI_imag_real_deriv(c.kappa, z));
        const double rel = std::abs(hp + tau * h) / (std::abs(hp) + std::abs(tau * h));
        CHECK(rel <= 1e-12);
    }
    // far beyond the closure scale Q underflows to an exact zero
    CHECK(interval_Q(c, 1e5, 0.5, no_alpha) == 0.0);
}

TEST_CASE("interval_psi: sign follows Q, magnitude follows the closure")
{
    const CornerData c = stokes_corner();
    const ScalarFn no_alpha{};
    for (double z : {9.0, 12.0, 15.0}) {
        const double tau = 50.0, delta = z / tau;
        const double Q = interval_Q(c, tau, delta, no_alpha);
        const double psi = interval_psi(c, tau, delta, no_alpha);
        CHECK(std::signbit(psi) == std::signbit(Q));
        const double expected = std::atan(Q * std::sinh(kPi * c.kappa) / kPi);
        CHECK(psi == doctest::Approx(expected).epsilon(1e-14));
        CHECK(std::abs(psi) < 1e4 * std::exp(-2.0 * z) / (tau * tau));
    }
}

TEST_CASE("interval_eigenvalues: closed-form deviation inside the remainder bound")
{
    const CornerData c = stokes_corner();
    const ScalarFn no_alpha{};
    for (double delta : {0.3, 0.45}) {
        const IntervalSpectrum spec = interval_eigenvalues(c, delta, no_alpha, 1, 3);
        REQUIRE(spec.entries.size() == 3);
        for (const IntervalEntry& e : spec.entries) {
            const double dev = std::abs(e.tau_hat - e.tau_closed) / e.tau_closed;
            // both sides underflow to exact zero once tau*delta is huge
            CHECK(dev <= 10.0 * std::exp(-2.0 * e.tau_hat * delta));
            CHECK(e.residual <= 1e-12);
            CHECK(e.robin_residual <= 1e-12);
        }
        // successive ratios approach e^{pi/kappa}
        for (std::size_t i = 0; i + 1 < spec.entries.size(); ++i) {
            const double ratio = spec.entries[i + 1].tau_hat / spec.entries[i].tau_hat;
            CHECK(std::abs(ratio / std::exp(kPi / c.kappa) - 1.0) < 1e-6);
        }
    }
    // gamma-shift covariance of the converged roots (closed-form level)
    const IntervalSpectrum s1 = interval_eigenvalues(stokes_corner(0.5), 0.4, no_alpha, 1, 2);
    const IntervalSpectrum s2 = interval_eigenvalues(stokes_corner(1.1), 0.4, no_alpha, 1, 2);
    const double scale = std::exp(0.6 / c.kappa);
    for (std::size_t i = 0; i < s1.entries.size(); ++i)
        CHECK(s2.entries[i].tau_closed / s1.entries[i].tau_closed ==
              doctest::Approx(scale).epsilon(1e-13));

    // the closure is not contractive when tau*delta is small
    CHECK_THROWS_AS(interval_eigenvalues(c, 0.01, no_alpha, 1, 1), InvalidParameterError);
}

TEST_CASE("interval eigenfunctions: phase law near zero and boundary smallness")
{
    const CornerData c = stokes_corner();
    const double delta = 0.3;
    const IntervalSpectrum spec = interval_eigenvalues(c, delta, ScalarFn{}, 1, 2);
    const IntervalEntry& e = spec.entry(1);

    // near r = 0 the eigenfunction is proportional to sin(kappa log(r/2) + gamma)
    const double amp = -std::sqrt(kPi / (c.kappa * std::sinh(kPi * c.kappa)));
    std::vector<double> r_samples;
    for (double z = 1e-4; z < 3e-3; z *= 1.7)
        r_samples.push_back(z / e.tau_hat);
    const std::vector<double> phi = interval_eigenfunction(spec, 1, r_samples);
    for (std::size_t i = 0; i < r_samples.size(); ++i) {
        const double r = r_samples[i];
        const double target = amp * std::sin(c.kappa * std::log(0.5 * e.tau_hat * r) -
                                             c.gamma_kappa);
        CHECK(std::abs(phi[i] - target) < 1e-6);
        // same phase as the extension function, up to the ladder sign
        const double ext = std::sin(c.kappa * std::log(0.5 * r) + c.gamma);
        if (std::abs(ext) > 0.1)
            CHECK(std::abs(std::abs(phi[i] / ext) - std::abs(amp)) < 1e-4);
    }

    // |Phi(delta)| = O(tau^{-1/2} e^{-delta tau})
    const double boundary = std::abs(interval_eigenfunction_value(spec, 1, delta));
    const double scalefree =
        boundary * std::sqrt(e.tau_hat) * std::exp(delta * e.tau_hat);
    CHECK(scalefree < 10.0);
    CHECK(scalefree > 1e-3);

    CHECK_THROWS_AS(interval_eigenfunction_value(spec, 7, 0.1), InvalidParameterError);
    CHECK_THROWS_AS(interval_eigenfunction_value(spec, 1, -0.1), DomainError);
}

TEST_CASE("eigenfunction localization: weighted mass concentrates at 1/tau")
{
    const CornerData c = stokes_corner();
    const double delta = 0.3;
    const IntervalSpectrum spec = interval_eigenvalues(c, delta, ScalarFn{}, 1, 1);
    const double tau = spec.entry(1).tau_hat;
    auto phi2r = [&](double t) {
        const double r = std::exp(t);
        const double v = interval_eigenfunction_value(spec, 1, r);
        return v * v * std::exp(2.0 * t);
    };
    const double t_lo = std::log(delta) - 22.0;
    const double inner10 =
        gauss_integrate_panels(phi2r, t_lo, std::log(10.0 / tau), 0.5, 16);
    const double total = gauss_integrate_panels(phi2r, t_lo, std::log(delta), 0.5, 16);
    CHECK(inner10 / total > 0.99);
}

TEST_CASE("moment scalings: closed-form limit and uniform bounds")
{
    const CornerData c = stokes_corner();
    const IntervalSpectrum spec = interval_eigenvalues(c, 0.3, ScalarFn{}, 1, 3);

    const std::vector<double> l2 = moment_scalings(spec, 0.0, MomentKind::L2);
    const double closed = besselK_imag_square_integral(c.kappa);
    for (double v : l2)
        CHECK(std::abs(v / closed - 1.0) < 1e-6);

    // beta = -1/2 is fine for the value moment, rejected for second derivatives
    const std::vector<double> l2h = moment_scalings(spec, -0.5, MomentKind::L2);
    for (double v : l2h)
        CHECK(v > 0.0);
    CHECK_THROWS_AS(moment_scalings(spec, -0.5, MomentKind::Hess), DomainError);
    CHECK_THROWS_AS(moment_scalings(spec, -0.1, MomentKind::Grad), DomainError);

    // uniform upper/lower bounds across the ladder for all three moments
    for (MomentKind kind : {MomentKind::L2, MomentKind::Grad, MomentKind::Hess}) {
        const double beta = (kind == MomentKind::L2) ? 0.25
                            : (kind == MomentKind::Grad) ? 0.6
                                                         : 1.4;
        const std::vector<double> vals = moment_scalings(spec, beta, kind);
        double lo = vals[0], hi = vals[0];
        for (double v : vals) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK(hi / lo < 1.5);
        CHECK(lo > 0.0);
    }
}

TEST_CASE("extension constant: manufactured solution, orthogonality, pole scaling")
{
    const CornerData c = stokes_corner();
    const HalfLineLadder l = halfline_ladder(c, 1, 2);
    const double tau1 = l.tau[0];
    const double tau = std::sqrt(l.tau[0] * l.tau[1]); // mid-window

    // h = e^{-r^2} sin(kappa log(r/2) + gamma) lies in the extension domain
    // with unit singular amplitude; f = (M + tau^2) h is computed in closed form
    auto f = [&](double r) {
        const double s = std::sin(c.kappa * std::log(0.5 * r) + c.gamma);
        const double cs = std::cos(c.kappa * std::log(0.5 * r) + c.gamma);
        return std::exp(-r * r) *
               ((4.0 - 4.0 * r * r + tau * tau) * s + 4.0 * c.kappa * cs);
    };
    const double C = extension_constant(f, c, tau, tau1, 10.0);
    CHECK(std::abs(C - 1.0) <= 1e-8);

    // a right-hand side orthogonal to K(tau r) has zero amplitude
    auto bump = [](double r) { return std::exp(-(r - 0.2) * (r - 0.2) * 50.0); };
    auto bump2 = [](double r) { return std::exp(-(r - 0.05) * (r - 0.05) * 200.0); };
    auto pair_with_K = [&](const ScalarFn& g) {
        return gauss_integrate_panels(
            [&](double t) {
                const double r = std::exp(t);
                return besselK_imag(c.kappa, tau * r) * g(r) * r * r;
            },
            std::log(1e-9), std::log(10.0), 0.4, 16);
    };
    const double i1 = pair_with_K(bump);
    const double i2 = pair_with_K(bump2);
    auto f_perp = [&](double r) { return bump(r) - (i1 / i2) * bump2(r); };
    CHECK(std::abs(extension_constant(f_perp, c, tau, tau1, 10.0)) <= 1e-8);

    // |C| grows like 1/|tau - tau_k| as tau approaches the ladder
    double prev = 0.0;
    for (double eps : {0.04, 0.02, 0.01}) {
        const double t = tau1 * (1.0 + eps);
        const double Ce = std::abs(extension_constant(bump, c, t, tau1, 10.0));
        const double scaled = Ce * (t - tau1);
        if (prev != 0.0)
            CHECK(std::abs(scaled / prev - 1.0) < 0.25);
        prev = scaled;
    }

    CHECK_THROWS_AS(extension_constant(bump, c, tau1, tau1, 10.0), SolverError);
    CHECK_THROWS_AS(extension_constant(bump, c, tau1 * 30.0, tau1, 10.0), DomainError);
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("slow");

TEST_CASE("half-line grid oracle decides the ladder normalization")
{
    const CornerData c = stokes_corner();
    const HalfLineLadder l = halfline_ladder(c, 1, 3);
    const double r_min = 0.001 / l.tau[2];
    const double r_max = 25.0 / l.tau[0];
    const HalfLineFdResult fd = halfline_fd_oracle(c, r_min, r_max, 6000);
    REQUIRE(fd.tau.size() >= 3);

    // the computed ladder matches the un-doubled closed form to 0.1% and is
    // far from the doubled variant; this pins the normalization
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(std::abs(fd.tau[i] / l.tau[i] - 1.0) < 1e-3);
        CHECK(std::abs(fd.tau[i] / l.tau_doubled[i] - 1.0) > 0.4);
    }
    // consecutive ratios land on e^{pi/kappa}
    for (std::size_t i = 0; i + 1 < fd.tau.size() && i + 1 < 3; ++i)
        CHECK(std::abs(fd.tau[i + 1] / fd.tau[i] / l.ratio - 1.0) < 1e-3);

    // simplicity: gaps exceed half the predicted gap
    for (std::size_t i = 0; i + 1 < fd.tau.size(); ++i)
        CHECK(fd.tau[i + 1] - fd.tau[i] > 0.5 * (l.ratio - 1.0) * fd.tau[i]);

    // grid eigenfunction correlates with K_{i kappa}(tau_k r)
    for (std::size_t i = 0; i < 2; ++i) {
        std::vector<double> kvals(fd.grid_t.size());
        for (std::size_t j = 0; j < fd.grid_t.size(); ++j)
            kvals[j] = besselK_imag(c.kappa, fd.tau[i] * std::exp(fd.grid_t[j]));
        const double num = grid_inner(fd.grid_t, fd.modes[i], kvals);
        const double den = std::sqrt(grid_inner(fd.grid_t, fd.modes[i], fd.modes[i]) *
                                     grid_inner(fd.grid_t, kvals, kvals));
        CHECK(std::abs(num) / den > 0.999);
    }

    CHECK_THROWS_AS(halfline_fd_oracle(c, 0.1, 0.05, 4000), InvalidParameterError);
}

TEST_CASE("interval grid oracle: agreement and second-order convergence")
{
    const CornerData c = stokes_corner();
    const double delta = 0.3;
    const IntervalSpectrum spec = interval_eigenvalues(c, delta, ScalarFn{}, 1, 1);
    const double tau_ref = spec.entry(1).tau_hat;
    // r_min small enough that the phase-law truncation error O((tau r_min)^2)
    // sits far below the grid error, so the grid order is measurable
    const double r_min = 3e-4 / tau_ref;

    const double t1 = interval_fd_tau(c, delta, ScalarFn{}, r_min, 2000, tau_ref * 1.04);
    const double t2 = interval_fd_tau(c, delta, ScalarFn{}, r_min, 4000, tau_ref * 1.04);
    CHECK(std::abs(t2 / tau_ref - 1.0) < 1e-3);

    const double e1 = std::abs(t1 - tau_ref);
    const double e2 = std::abs(t2 - tau_ref);
    CHECK(e1 / e2 > 3.2);
    CHECK(e1 / e2 < 5.0);
}

TEST_SUITE_END();
