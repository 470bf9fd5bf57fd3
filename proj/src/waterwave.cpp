#include "cornerspec/waterwave.hpp"

#include "cornerspec/errors.hpp"
#include "cornerspec/quadrature.hpp"

#include <cmath>
#include <memory>
#include <vector>

namespace cornerspec {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
const double kA0 = 1.0 / std::sqrt(3.0);
} // namespace

CornerData stokes_corner_params(double gamma)
{
    const double alpha_star = 0.5 * kPi - std::atan(kA0); // = pi/3
    const double rho0 = 0.5 * std::sqrt(3.0);
    CornerData c = make_corner_data(alpha_star, rho0, gamma, 8, 0.5);
    if (!(c.mu[0] > 1.0))
        throw InternalError("stokes_corner_params: admissibility must hold here");
    return c;
}

double tau1_root()
{
    // f(tau) = tau + cot(pi tau/2)/sqrt(3) decreases through zero on (1, 2)
    auto f = [](double t) { return t + std::cos(0.5 * kPi * t) / std::sin(0.5 * kPi * t) / std::sqrt(3.0); };
    double lo = 1.0, hi = 2.0 - 1e-12;
    for (int it = 0; it < 200 && (hi - lo) > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
        const double s = std::sin(0.5 * kPi * t);
        const double fx = t + std::cos(0.5 * kPi * t) / s / std::sqrt(3.0);
        const double df = 1.0 - 0.5 * kPi / (std::sqrt(3.0) * s * s);
        const double tn = t - fx / df;
        if (tn > 1.0 && tn < 2.0)
            t = tn;
    }
    if (std::abs(f(t)) > 1e-12)
        throw InternalError("tau1_root: residual tolerance not met");
    return t;
}

ScalarFn rho_coefficient(const StokesLinearization& lin)
{
    if (!lin.profile.eta || !lin.profile.eta_p || !lin.profile.eta_pp || !lin.psi_y)
        throw InvalidParameterError("rho_coefficient: incomplete linearization");
    const StokesLinearization l = lin;
    return [l](double x) {
        if (!(x > 0.0))
            throw DomainError("rho_coefficient: x must lie in (0, Lambda/2]");
        const double eta = l.profile.eta(x);
        const double etap = l.profile.eta_p(x);
        const double etapp = l.profile.eta_pp(x);
        const double head = l.R - eta;
        if (!(head > 0.0))
            throw GeometryError("rho_coefficient: stagnation away from the crest");
        const double py = l.psi_y(x);
        const double slope2 = 1.0 + etap * etap;
        const double r = std::hypot(x, l.profile.eta0 - eta);
        const double numerator =
            1.0 - l.omega_surface * slope2 * py + etapp * py * py;
        return r * numerator / (2.0 * head * std::sqrt(slope2));
    };
}

SurfaceProfile profile_from_expansion(double a1, double a2, double cutoff, double Lambda,
                                      double eta0)
{
    if (!(Lambda > 0.0) || !(cutoff > 0.0) || !(cutoff < 0.5 * Lambda))
        throw InvalidParameterError("profile_from_expansion: cutoff must lie in (0, Lambda/2)");
    const double half = 0.5 * Lambda;
    const double width = half - cutoff;

    auto core = [=](double x) { return -kA0 + a1 * std::sqrt(x) + a2 * x; };
    auto core_d = [=](double x) { return 0.5 * a1 / std::sqrt(x) + a2; };
    auto taper = [=](double x) {
        // reversed C^2 smoothstep: 1 below the cutoff, 0 at the trough
        if (x <= cutoff)
            return 1.0;
        const double s = (x - cutoff) / width;
        if (s >= 1.0)
            return 0.0;
        const double b = s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
        return 1.0 - b;
    };
    auto taper_d = [=](double x) {
        if (x <= cutoff || x >= half)
            return 0.0;
        const double s = (x - cutoff) / width;
        return -30.0 * s * s * (1.0 + s * (-2.0 + s)) / width;
    };

    auto slope = [=](double x) { return core(x) * taper(x); };

    // antiderivative of the core below the cutoff is explicit; beyond it the
    // slope is tabulated once and integrated panel-by-panel
    auto core_int = [=](double x) {
        return -kA0 * x + (2.0 / 3.0) * a1 * std::pow(x, 1.5) + 0.5 * a2 * x * x;
    };
    const int n_anchor = 512;
    auto anchors = std::make_shared<std::vector<double>>(n_anchor + 1, 0.0);
    {
        double acc = eta0 + core_int(cutoff);
        (*anchors)[0] = acc;
        for (int i = 1; i <= n_anchor; ++i) {
            const double xa = cutoff + width * (i - 1) / n_anchor;
            const double xb = cutoff + width * i / n_anchor;
            acc += gauss_integrate(slope, xa, xb, 12);
            (*anchors)[i] = acc;
        }
    }
    auto eta = [=](double x) {
        if (x <= cutoff)
            return eta0 + core_int(x);
        const double s = std::min((x - cutoff) / width, 1.0);
        const int i = std::min(static_cast<int>(s * n_anchor), n_anchor - 1);
        const double xa = cutoff + width * static_cast<double>(i) / n_anchor;
        return (*anchors)[i] + gauss_integrate(slope, xa, x, 12);
    };
    if (!(eta(half) > 0.0))
        throw GeometryError("profile_from_expansion: surface dips below the bottom");

    SurfaceProfile p;
    p.Lambda = Lambda;
    p.a0 = kA0;
    p.alpha = 0.5;
    p.eta0 = eta0;
    p.straight_until = (a1 == 0.0 && a2 == 0.0) ? cutoff : 0.0;
    p.eta = eta;
    p.eta_p = slope;
    p.eta_pp = [=](double x) { return core_d(x) * taper(x) + core(x) * taper_d(x); };
    return p;
}

StokesLinearization synthetic_linearization(SurfaceProfile profile, double omega_surface)
{
    StokesLinearization lin;
    lin.R = profile.eta0; // crest stagnation fixes the Bernoulli constant
    lin.m = 0.5;
    lin.omega_surface = omega_surface;
    lin.omega_prime = [](double) { return 0.0; };
    const SurfaceProfile p = profile;
    lin.psi_y = [p](double x) {
        const double r = p.corner_distance(x);
        const double theta = p.theta_at(x);
        return std::sqrt(r) * std::cos(0.5 * theta);
    };
    lin.profile = std::move(profile);
    return lin;
}

} // namespace cornerspec
