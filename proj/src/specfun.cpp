#include "cornerspec/specfun.hpp"

#include "cornerspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cornerspec {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Switch-over radii between evaluation regimes, tuned so the routes overlap
// with cross-checked agreement (see the unit tests).
constexpr double kKAsymptoticFrom = 350.0;
constexpr double kIAsymptoticFrom = 400.0;
constexpr double kKUnderflowAt = 705.0;
constexpr double kIOverflowAt = 705.0;

void check_corner_args(double alpha_star, double rho0)
{
    if (!(alpha_star > 0.0) || !(alpha_star < kPi))
        throw InvalidParameterError("corner angle must lie in (0, pi)");
    if (!(rho0 > 0.0))
        throw InvalidParameterError("corner Robin coefficient must be positive");
}

} // namespace

double solve_kappa(double alpha_star, double rho0)
{
    check_corner_args(alpha_star, rho0);
    auto f = [&](double k) { return k * std::tanh(k * alpha_star) - rho0; };
    double lo = 0.0;
    double hi = std::max({1.0, rho0, rho0 / alpha_star});
    while (f(hi) < 0.0)
        hi *= 2.0;
    // Bracketed Newton; the left side is strictly increasing.
    double x = std::min(hi, std::max(std::sqrt(rho0 / alpha_star), 0.5 * hi));
    for (int it = 0; it < 200; ++it) {
        const double t = std::tanh(x * alpha_star);
        const double fx = x * t - rho0;
        (fx < 0.0 ? lo : hi) = x;
        const double c = std::cosh(x * alpha_star);
        const double df = t + x * alpha_star / (c * c);
        double step = fx / df;
        double xn = x - step;
        if (!(xn > lo) || !(xn < hi))
            xn = 0.5 * (lo + hi);
        if (std::abs(xn - x) <= 1e-16 * std::abs(x)) {
            x = xn;
            break;
        }
        x = xn;
    }
    if (std::abs(f(x)) > 1e-12 * rho0)
        throw InternalError("solve_kappa: residual tolerance not met");
    return x;
}

double solve_mu(double alpha_star, double rho0, int k)
{
    check_corner_args(alpha_star, rho0);
    if (k < 1)
        throw InvalidParameterError("solve_mu: branch index must be >= 1");
    // Branch window for mu*alpha_star; open at the left end where tan blows up.
    const double xl = (k - 1) * kPi + 0.5 * kPi;
    const double xr = k * kPi;
    auto g = [&](double x) { return (x / alpha_star) * std::tan(x) + rho0; };
    double lo = xl + 1e-9 * (xr - xl);
    double hi = xr - 1e-12 * (xr - xl);
    while (g(lo) > 0.0) {
        lo = xl + 0.1 * (lo - xl);
        if (lo - xl < 1e-14 * (xr - xl))
            throw InternalError("solve_mu: failed to bracket the branch");
    }
    if (g(hi) < 0.0)
        throw InternalError("solve_mu: failed to bracket the branch");
    // Bisection is safe: the branch function is monotone increasing.
    for (int it = 0; it < 200 && (hi - lo) > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    // Two Newton polishing steps.
    for (int it = 0; it < 2; ++it) {
        const double t = std::tan(x);
        const double c = std::cos(x);
        const double fx = (x / alpha_star) * t + rho0;
        const double df = t / alpha_star + x / (alpha_star * c * c);
        const double xn = x - fx / df;
        if (xn > xl && xn < xr)
            x = xn;
    }
    const double mu = x / alpha_star;
    if (std::abs(mu * std::tan(mu * alpha_star) + rho0) > 1e-10 * std::max(1.0, rho0))
        throw InternalError("solve_mu: residual tolerance not met");
    if (!(x > xl && x < xr))
        throw InternalError("solve_mu: root left the mandated branch window");
    return mu;
}

std::complex<double> log_gamma(std::complex<double> z)
{
    if (z.real() <= 0.0)
        throw InvalidParameterError("log_gamma: requires Re z > 0");
    // Shift into |z| >= 12 and apply the Stirling series there.
    std::complex<double> shift(0.0, 0.0);
    int m = 0;
    while (std::abs(z + static_cast<double>(m)) < 12.0 || z.real() + m < 12.0)
        ++m;
    for (int j = 0; j < m; ++j)
        shift += std::log(z + static_cast<double>(j));
    const std::complex<double> w = z + static_cast<double>(m);
    static const double coeff[] = {
        1.0 / 12.0,          -1.0 / 360.0,      1.0 / 1260.0,       -1.0 / 1680.0,
        1.0 / 1188.0,        -691.0 / 360360.0, 1.0 / 156.0,        -3617.0 / 122400.0,
    };
    const std::complex<double> w2 = w * w;
    std::complex<double> series(0.0, 0.0);
    std::complex<double> wp = w;
    for (double c : coeff) {
        series += c / wp;
        wp *= w2;
    }
    const std::complex<double> lg =
        (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * kPi) + series;
    return lg - shift;
}

double gamma_phase(double kappa)
{
    if (!(kappa > 0.0))
        throw InvalidParameterError("gamma_phase: kappa must be positive");
    const std::complex<double> lg = log_gamma(std::complex<double>(1.0, kappa));
    // Modulus identity |Gamma(1+i*kappa)|^2 = pi*kappa / sinh(pi*kappa).
    const double mod2 = std::exp(2.0 * lg.real());
    const double pk = kPi * kappa;
    const double expected = (pk < 700.0) ? pk / std::sinh(pk) : 0.0;
    if (expected > 0.0 && std::abs(mod2 - expected) > 1e-12 * expected)
        throw InternalError("gamma_phase: Gamma modulus identity violated");
    return lg.imag();
}

CornerData make_corner_data(double alpha_star, double rho0, double gamma, int n_mu, double alpha)
{
    check_corner_args(alpha_star, rho0);
    if (n_mu < 1)
        throw InvalidParameterError("make_corner_data: need at least one mu root");
    if (!(alpha > 0.0) || alpha > 1.0)
        throw InvalidParameterError("make_corner_data: Hoelder exponent must lie in (0, 1]");
    CornerData c;
    c.alpha_star = alpha_star;
    c.rho0 = rho0;
    c.alpha = alpha;
    c.kappa = solve_kappa(alpha_star, rho0);
    c.gamma_kappa = gamma_phase(c.kappa);
    c.gamma = gamma - kPi * std::floor(gamma / kPi);
    c.mu.reserve(n_mu);
    for (int k = 1; k <= n_mu; ++k)
        c.mu.push_back(solve_mu(alpha_star, rho0, k));
    if (!(c.mu[0] > 1.0))
        throw InvalidParameterError("make_corner_data: admissibility mu_1 > 1 fails");
    return c;
}

namespace {

// Trapezoid refinement for even analytic integrands on [0, T] that decay
// superexponentially; converges geometrically in the step halving. The
// absolute floor guards stopping near zeros of the oscillatory integral.
template <typename F>
double trapezoid_refine(F&& f, double T, double rel_tol, const char* who)
{
    double h = std::min(0.5, T / 8.0);
    double sum_abs = 0.0;
    auto pass = [&](double step, double offset) {
        double s = 0.0;
        for (double t = offset; t <= T; t += step) {
            const double v = f(t);
            s += v;
            sum_abs += std::abs(v);
        }
        return s;
    };
    double sum = 0.5 * f(0.0) + pass(h, h);
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 24; ++it) {
        sum += pass(h, 0.5 * h);
        h *= 0.5;
        const double cur = sum * h;
        const double floor_abs = 1e-15 * sum_abs * h;
        if (it >= 1 && std::abs(cur - prev) <= rel_tol * std::abs(cur) + floor_abs)
            return cur;
        prev = cur;
    }
    throw InternalError(std::string(who) + ": quadrature failed to converge");
}

void check_bessel_args(double kappa, double z)
{
    if (!(kappa > 0.0))
        throw InvalidParameterError("imaginary-order Bessel: kappa must be positive");
    if (!(z > 0.0))
        throw DomainError("imaginary-order Bessel: argument must be positive");
}

// e^{z} K_{i kappa}(z) via the even integrand exp(-2 z sinh^2(t/2)) cos(kappa t).
double K_integral_scaled(double kappa, double z, bool derivative)
{
    const double u_tail = 60.0 + std::max(0.0, -std::log(z));
    const double T = 2.0 * std::asinh(std::sqrt(0.5 * u_tail / z));
    auto f = [&](double t) {
        const double s = std::sinh(0.5 * t);
        const double e = std::exp(-2.0 * z * s * s);
        const double c = std::cos(kappa * t);
        return derivative ? e * std::cosh(t) * c : e * c;
    };
    return trapezoid_refine(f, T, 1e-13, "besselK_imag");
}

// Exponential-expansion coefficient ratio: a_k / a_{k-1}.
inline double asym_ratio(double kappa, int k)
{
    const double odd = 2.0 * k - 1.0;
    return -(4.0 * kappa * kappa + odd * odd) / (8.0 * k);
}

// Sums S = sum a_k z^{-k} and S' = d/dz S, truncating at the smallest term.
void asym_sums(double kappa, double z, double& S, double& Sp)
{
    double term = 1.0;
    S = 1.0;
    Sp = 0.0;
    double prev_mag = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 80; ++k) {
        term *= asym_ratio(kappa, k) / z;
        const double mag = std::abs(term);
        if (mag > prev_mag)
            break; // divergent tail reached
        S += term;
        Sp += -k * term / z;
        if (mag <= 1e-17 * std::abs(S))
            break;
        prev_mag = mag;
    }
}

struct ISeriesResult {
    std::complex<double> value;
    std::complex<double> derivative;
};

// Ascending series of I_{i kappa}(z) in complex arithmetic.
ISeriesResult I_series_complex(double kappa, double z)
{
    if (z > 690.0)
        throw OverflowError("besselI_imag_real: series route would overflow");
    // 1/Gamma(1+i kappa); kappa is usually fixed across many calls.
    static thread_local double cached_kappa = -1.0;
    static thread_local std::complex<double> cached_rg;
    if (kappa != cached_kappa) {
        const double pk = kPi * kappa;
        cached_rg = std::polar(std::sqrt(std::sinh(pk) / pk), -gamma_phase(kappa));
        cached_kappa = kappa;
    }
    const double L = std::log(0.5 * z);
    const std::complex<double> head = std::polar(1.0, kappa * L); // (z/2)^{i kappa}
    const double q = 0.25 * z * z;                                // (z/2)^2
    // term_k = (z/2)^{2k} / (k! Gamma(k+1+i kappa)); the factors overflow and
    // underflow separately for large z, so only their product is tracked.
    std::complex<double> term = cached_rg;
    std::complex<double> sum = term;
    std::complex<double> dsum = term * std::complex<double>(0.0, kappa);
    for (int k = 1; k <= 2000; ++k) {
        term *= q / (std::complex<double>(static_cast<double>(k), 0.0) *
                     std::complex<double>(static_cast<double>(k), kappa));
        sum += term;
        dsum += term * std::complex<double>(2.0 * k, kappa);
        if (std::abs(term) <= 1e-17 * std::abs(sum) && k > 4)
            break;
    }
    ISeriesResult r;
    r.value = head * sum;
    r.derivative = head * dsum / z;
    return r;
}

} // namespace

namespace bessel_routes {

double K_integral(double kappa, double z)
{
    check_bessel_args(kappa, z);
    return std::exp(-z) * K_integral_scaled(kappa, z, false);
}

double K_series(double kappa, double z)
{
    check_bessel_args(kappa, z);
    const ISeriesResult r = I_series_complex(kappa, z);
    return -kPi * r.value.imag() / std::sinh(kPi * kappa);
}

double K_asymptotic(double kappa, double z)
{
    check_bessel_args(kappa, z);
    double S, Sp;
    asym_sums(kappa, z, S, Sp);
    return std::sqrt(0.5 * kPi / z) * std::exp(-z) * S;
}

double I_series(double kappa, double z)
{
    check_bessel_args(kappa, z);
    return I_series_complex(kappa, z).value.real();
}

double I_asymptotic(double kappa, double z)
{
    check_bessel_args(kappa, z);
    double T = 1.0, Tp = 0.0;
    {
        double term = 1.0;
        double prev_mag = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= 80; ++k) {
            term *= -asym_ratio(kappa, k) / z; // alternating counterpart
            const double mag = std::abs(term);
            if (mag > prev_mag)
                break;
            T += term;
            Tp += -k * term / z;
            if (mag <= 1e-17 * std::abs(T))
                break;
            prev_mag = mag;
        }
    }
    (void)Tp;
    return std::exp(z) / std::sqrt(2.0 * kPi * z) * T;
}

} // namespace bessel_routes

double besselK_imag(double kappa, double z)
{
    check_bessel_args(kappa, z);
    if (z > kKUnderflowAt)
        return 0.0;
    if (z >= kKAsymptoticFrom)
        return bessel_routes::K_asymptotic(kappa, z);
    return std::exp(-z) * K_integral_scaled(kappa, z, false);
}

double besselK_imag_deriv(double kappa, double z)
{
    check_bessel_args(kappa, z);
    if (z > kKUnderflowAt)
        return 0.0;
    if (z >= kKAsymptoticFrom) {
        double S, Sp;
        asym_sums(kappa, z, S, Sp);
        return std::sqrt(0.5 * kPi / z) * std::exp(-z) * (-S - 0.5 * S / z + Sp);
    }
    return -std::exp(-z) * K_integral_scaled(kappa, z, true);
}

double besselI_imag_real(double kappa, double z)
{
    check_bessel_args(kappa, z);
    if (z > kIOverflowAt)
        throw OverflowError("besselI_imag_real: argument too large");
    if (z >= kIAsymptoticFrom)
        return bessel_routes::I_asymptotic(kappa, z);
    return I_series_complex(kappa, z).value.real();
}

double besselI_imag_real_deriv(double kappa, double z)
{
    check_bessel_args(kappa, z);
    if (z > kIOverflowAt)
        throw OverflowError("besselI_imag_real_deriv: argument too large");
    if (z >= kIAsymptoticFrom) {
        double T = 1.0, Tp = 0.0;
        double term = 1.0;
        double prev_mag = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= 80; ++k) {
            term *= -asym_ratio(kappa, k) / z;
            const double mag = std::abs(term);
            if (mag > prev_mag)
                break;
            T += term;
            Tp += -k * term / z;
            if (mag <= 1e-17 * std::abs(T))
                break;
            prev_mag = mag;
        }
        return std::exp(z) / std::sqrt(2.0 * kPi * z) * (T - 0.5 * T / z + Tp);
    }
    return I_series_complex(kappa, z).derivative.real();
}

} // namespace cornerspec
