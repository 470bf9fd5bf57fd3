#include "cornerspec/profile.hpp"

#include "cornerspec/errors.hpp"

#include <algorithm>
#include <cmath>

namespace cornerspec {

namespace {

// C^2 transition: 0 at s=0, 1 at s=1, first and second derivatives vanish
// at both ends.
double smoothstep5(double s)
{
    if (s <= 0.0)
        return 0.0;
    if (s >= 1.0)
        return 1.0;
    return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double smoothstep5_d(double s)
{
    if (s <= 0.0 || s >= 1.0)
        return 0.0;
    return 30.0 * s * s * (1.0 + s * (-2.0 + s));
}

double smoothstep5_dd(double s)
{
    if (s <= 0.0 || s >= 1.0)
        return 0.0;
    return 60.0 * s * (1.0 + s * (-3.0 + 2.0 * s));
}

} // namespace

double SurfaceProfile::corner_distance(double x) const
{
    return std::hypot(x, eta0 - eta(x));
}

double SurfaceProfile::surface_x_at_radius(double r) const
{
    if (!(r > 0.0) || r > corner_distance(0.5 * Lambda))
        throw DomainError("surface_x_at_radius: radius outside the half period");
    double lo = 0.0, hi = 0.5 * Lambda;
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (corner_distance(mid) < r ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double SurfaceProfile::theta_at(double x) const
{
    return std::atan2(x, eta0 - eta(x));
}

void validate_profile(const SurfaceProfile& p, int n_samples)
{
    if (!(p.Lambda > 0.0) || !p.eta || !p.eta_p)
        throw GeometryError("validate_profile: incomplete profile");
    const double half = 0.5 * p.Lambda;
    for (int i = 1; i <= n_samples; ++i) {
        const double x = half * i / n_samples;
        if (!(p.eta(x) > 0.0))
            throw GeometryError("validate_profile: surface height must stay positive");
    }
    if (std::abs(p.eta_p(half)) > 1e-10)
        throw GeometryError("validate_profile: trough slope must vanish");
    if (std::abs(p.eta_p(1e-12) + p.a0) > 1e-5 * std::max(1.0, p.a0))
        throw GeometryError("validate_profile: corner slope must approach -a0");

    // log-log slope of |eta' + a0| near zero estimates the corner exponent
    if (p.straight_until <= 0.0) {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        int n = 0;
        for (double x = 1e-6; x < 1e-3; x *= 2.0) {
            const double d = std::abs(p.eta_p(x) + p.a0);
            if (d <= 0.0)
                continue;
            const double lx = std::log(x), ly = std::log(d);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++n;
        }
        if (n >= 4) {
            const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            if (std::abs(slope - p.alpha) > 0.2)
                throw GeometryError("validate_profile: corner remainder exponent is off");
        }
    }
}

SurfaceProfile StraightenedProfile::as_profile() const
{
    SurfaceProfile p = base;
    p.eta = xi;
    p.eta_p = xi_p;
    p.eta_pp = xi_pp;
    p.straight_until = 3.0 * delta;
    return p;
}

StraightenedProfile build_straightened(const SurfaceProfile& profile, const ScalarFn& rho,
                                       double rho0, double delta)
{
    if (!(delta > 0.0) || !(4.0 * delta < 0.5 * profile.Lambda - delta))
        throw GeometryError("build_straightened: delta too large for the half period");
    StraightenedProfile s;
    s.base = profile;
    s.delta = delta;
    s.rho = rho;
    const double a0 = profile.a0;
    const double eta0 = profile.eta0;
    const SurfaceProfile base = profile;
    const double x_lo = 3.0 * delta, x_hi = 4.0 * delta;
    const double slope_len = std::sqrt(1.0 + a0 * a0);

    s.xi = [=](double x) {
        const double straight = eta0 - a0 * x;
        if (x <= x_lo)
            return straight;
        if (x >= x_hi)
            return base.eta(x);
        const double b = smoothstep5((x - x_lo) / delta);
        return (1.0 - b) * straight + b * base.eta(x);
    };
    s.xi_p = [=](double x) {
        if (x <= x_lo)
            return -a0;
        if (x >= x_hi)
            return base.eta_p(x);
        const double u = (x - x_lo) / delta;
        const double b = smoothstep5(u);
        const double bp = smoothstep5_d(u) / delta;
        const double straight = eta0 - a0 * x;
        return (1.0 - b) * (-a0) + b * base.eta_p(x) + bp * (base.eta(x) - straight);
    };
    s.xi_pp = [=](double x) {
        if (x <= x_lo)
            return 0.0;
        if (x >= x_hi)
            return base.eta_pp(x);
        const double u = (x - x_lo) / delta;
        const double b = smoothstep5(u);
        const double bp = smoothstep5_d(u) / delta;
        const double bpp = smoothstep5_dd(u) / (delta * delta);
        const double straight = eta0 - a0 * x;
        return b * base.eta_pp(x) + 2.0 * bp * (base.eta_p(x) + a0) +
               bpp * (base.eta(x) - straight);
    };
    s.chi = [=](double x) {
        const double straight_coeff = rho0 / (slope_len * x);
        if (x <= x_lo)
            return straight_coeff;
        const double r_eta = std::hypot(x, eta0 - base.eta(x));
        const double curved_coeff = rho(x) / r_eta;
        if (x >= x_hi)
            return curved_coeff;
        const double b = smoothstep5((x - x_lo) / delta);
        return (1.0 - b) * straight_coeff + b * curved_coeff;
    };
    return s;
}

StraightenedDeviation straightened_deviation(const StraightenedProfile& s, int n_samples)
{
    StraightenedDeviation d;
    const SurfaceProfile& p = s.base;
    const double half = 0.5 * p.Lambda;
    for (int i = 1; i <= n_samples; ++i) {
        const double x = half * i / n_samples;
        d.sup_xi = std::max(d.sup_xi, std::abs(s.xi(x) - p.eta(x)));
        d.sup_xi_p = std::max(d.sup_xi_p, std::abs(s.xi_p(x) - p.eta_p(x)));
        // compare on the rho scale: R*chi carries the units of rho
        const double r_xi = std::hypot(x, p.eta0 - s.xi(x));
        d.sup_chi = std::max(d.sup_chi, std::abs(r_xi * s.chi(x) - s.rho(x)));
    }
    d.c_fitted = (d.sup_xi + d.sup_xi_p + d.sup_chi) / std::pow(s.delta, p.alpha);
    return d;
}

} // namespace cornerspec
