#pragma once

#include "cornerspec/profile.hpp"
#include "cornerspec/specfun.hpp"

namespace cornerspec {

/// Linearized quantities of an extreme wave around its 120-degree crest.
/// psi_y is the vertical velocity of the background flow on the surface as a
/// function of x; omega_surface is the vorticity value there (the surface is
/// a streamline, so it is a single number); omega_prime feeds the zeroth
/// order coefficient of the eigenproblem.
struct StokesLinearization {
    ScalarFn omega_prime;
    ScalarFn psi_y;
    double omega_surface = 0.0;
    double R = 0.0; // Bernoulli constant
    double m = 0.0; // mass flux
    SurfaceProfile profile;
};

/// Corner fingerprint of the extreme crest: alpha_star = pi/3,
/// rho0 = sqrt(3)/2, kappa and the mu ladder solved to full precision.
CornerData stokes_corner_params(double gamma);

/// Smallest positive root of tau = -(1/sqrt 3) cot(pi tau / 2), in (1, 2).
double tau1_root();

/// Robin coefficient of the linearized surface condition,
/// rho = r (1 - w1 (1+eta'^2) psi_y + eta'' psi_y^2) / (2 (R-eta) sqrt(1+eta'^2)).
/// Fails with a stagnation error when R - eta(x) <= 0 away from the crest.
ScalarFn rho_coefficient(const StokesLinearization& lin);

/// Test profile synthesized from the crest expansion
/// eta'(x) = -1/sqrt(3) + a1 x^{1/2} + a2 x near zero, blended to a flat
/// trough with eta'(Lambda/2) = 0.
SurfaceProfile profile_from_expansion(double a1, double a2, double cutoff,
                                      double Lambda = 2.0, double eta0 = 1.0);

/// Fills the linearization with the crest-expansion velocity
/// psi_y = r^{1/2} cos(theta/2) and a constant surface vorticity.
StokesLinearization synthetic_linearization(SurfaceProfile profile,
                                            double omega_surface = 0.0);

} // namespace cornerspec
