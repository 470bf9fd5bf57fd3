#pragma once

#include <functional>

namespace cornerspec {

using ScalarFn = std::function<double(double)>;

/// Periodic even free-surface profile, reduced to the half period (0, L/2].
/// eta decreases from the crest at x = 0 with corner slope eta'(0+) = -a0.
struct SurfaceProfile {
    double Lambda = 0.0;
    ScalarFn eta;
    ScalarFn eta_p;
    ScalarFn eta_pp;
    double a0 = 0.0;
    double alpha = 1.0;  // Hoelder exponent of eta' + a0 near the crest
    double eta0 = 0.0;   // crest height eta(0)
    double straight_until = 0.0; // surface exactly straight for x <= this

    /// Distance of the surface point (x, eta(x)) to the crest (0, eta0).
    double corner_distance(double x) const;

    /// Inverse of corner_distance on (0, L/2]; monotone for decreasing eta.
    double surface_x_at_radius(double r) const;

    /// Polar angle of the surface point, measured from the downward vertical.
    double theta_at(double x) const;
};

/// Shape checks: positivity, flat trough, corner slope, and (when the
/// profile is genuinely curved) a log-log slope fit of eta' + a0 near zero.
/// Throws GeometryError when an invariant fails.
void validate_profile(const SurfaceProfile& p, int n_samples = 200);

/// Companion profile whose surface is exactly straight near the corner and
/// equals eta away from it; chi is the straightened Robin coefficient per
/// unit arclength (it equals rho0/R on the straight part and rho/r outside
/// the blend).
struct StraightenedProfile {
    SurfaceProfile base;
    double delta = 0.0;
    ScalarFn rho; // the curved-problem coefficient used at construction
    ScalarFn xi;
    ScalarFn xi_p;
    ScalarFn xi_pp;
    ScalarFn chi;

    /// View of xi as a SurfaceProfile (for meshing the model domain).
    SurfaceProfile as_profile() const;
};

/// Builds the straightened companion: xi(x) = eta0 - a0 x and
/// chi = rho0/R for x in (0, 3 delta], a smooth blend on [3 delta, 4 delta],
/// and xi = eta, chi = rho/r beyond. Requires 4*delta < Lambda/2 - delta.
StraightenedProfile build_straightened(const SurfaceProfile& profile, const ScalarFn& rho,
                                       double rho0, double delta);

/// Measured deviations sup|xi-eta|, sup|xi'-eta'|, sup|R*chi - rho| and the
/// fitted constant c in the delta^alpha envelope.
struct StraightenedDeviation {
    double sup_xi = 0.0;
    double sup_xi_p = 0.0;
    double sup_chi = 0.0;
    double c_fitted = 0.0;
};

StraightenedDeviation straightened_deviation(const StraightenedProfile& s,
                                             int n_samples = 400);

} // namespace cornerspec
