#pragma once

#include <complex>
#include <vector>

namespace cornerspec {

/// Spectral fingerprint of a Robin corner.
///
/// kappa is the positive root of kappa*tanh(kappa*alpha_star) = rho0 and
/// drives the eigenvalue ladder; mu lists the positive roots of
/// mu*tan(mu*alpha_star) = -rho0 ordered by branch; gamma selects the
/// self-adjoint realization; gamma_kappa = arg Gamma(1 + i*kappa).
struct CornerData {
    double alpha_star = 0.0;
    double rho0 = 0.0;
    double kappa = 0.0;
    double gamma = 0.0;
    double gamma_kappa = 0.0;
    std::vector<double> mu;
    double alpha = 1.0; // Hoelder exponent of the surface profile
};

/// Positive root of kappa*tanh(kappa*alpha_star) = rho0.
/// The left side is strictly increasing, so the root is unique.
double solve_kappa(double alpha_star, double rho0);

/// k-th positive root of mu*tan(mu*alpha_star) = -rho0, numbered so that
/// mu_k*alpha_star lies in ((k-1)*pi + pi/2, k*pi), k >= 1.
double solve_mu(double alpha_star, double rho0, int k);

/// arg Gamma(1 + i*kappa), continuous in kappa (not reduced mod 2*pi).
/// Also validates |Gamma(1+i*kappa)|^2 = pi*kappa/sinh(pi*kappa) internally.
double gamma_phase(double kappa);

/// log Gamma(z) for Re z > 0 by shifted Stirling series.
std::complex<double> log_gamma(std::complex<double> z);

/// Builds CornerData: solves both transcendental equations, computes the
/// Gamma phase, and enforces the admissibility condition mu_1 > 1.
/// gamma is reduced mod pi into [0, pi).
CornerData make_corner_data(double alpha_star, double rho0, double gamma, int n_mu = 8,
                            double alpha = 1.0);

/// Modified Bessel function K of imaginary order: K_{i*kappa}(z), real for
/// z > 0. Integral representation for moderate z, large-z expansion beyond;
/// underflows to exact 0 past z ~ 705.
double besselK_imag(double kappa, double z);

/// Real symmetric combination (I_{i*kappa}(z) + I_{-i*kappa}(z)) / 2.
/// Ascending complex series for moderate z, exponential expansion for large
/// z; throws OverflowError instead of returning infinity.
double besselI_imag_real(double kappa, double z);

/// d/dz of besselK_imag.
double besselK_imag_deriv(double kappa, double z);

/// d/dz of besselI_imag_real.
double besselI_imag_real_deriv(double kappa, double z);

/// Independent evaluation routes, exposed for cross-regime consistency
/// checks. Each is accurate only on its own window.
namespace bessel_routes {

/// K by the Laplace-type integral; valid for z in (0, ~700].
double K_integral(double kappa, double z);

/// K from the ascending complex series; cancellation limits it to z <~ 6.
double K_series(double kappa, double z);

/// K from the exponential expansion; accurate for z >~ 100.
double K_asymptotic(double kappa, double z);

/// Itilde from the ascending series; overflow limits it to z <~ 690.
double I_series(double kappa, double z);

/// Itilde from the exponential expansion; accurate for z >~ 100.
double I_asymptotic(double kappa, double z);

} // namespace bessel_routes

} // namespace cornerspec
