#include "cornerspec/model1d.hpp"

#include "cornerspec/errors.hpp"
#include "cornerspec/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace cornerspec {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double ladder_tau(const CornerData& c, int k)
{
    return std::exp((c.gamma + c.gamma_kappa + k * kPi) / c.kappa);
}

// Symmetric tridiagonal pencil A h = lambda B h with B diagonal positive.
struct TridiagPencil {
    std::vector<double> diag, sub, bdiag;
    std::vector<double> grid; // log-radius nodes owned by the rows
};

// Assembles -(d^2/dt^2) - kappa^2 on a uniform log-radius grid with the
// derivative condition h'(t0) = c_left h(t0) at the left end and either a
// Dirichlet truncation or h'(t_end) = c_right h(t_end) at the right end.
// Ghost-node elimination with half-cell scaling keeps the pencil symmetric.
TridiagPencil assemble_log_grid(double kappa, double t_min, double t_max, int n_points,
                                double c_left, bool right_robin, double c_right)
{
    if (n_points < 16)
        throw InvalidParameterError("log-grid oracle: too few grid points");
    const double dt = (t_max - t_min) / (n_points - 1);
    const double idt2 = 1.0 / (dt * dt);
    const int m = right_robin ? n_points : n_points - 1;
    TridiagPencil p;
    p.diag.resize(m);
    p.sub.resize(m - 1);
    p.bdiag.resize(m);
    p.grid.resize(m);
    for (int i = 0; i < m; ++i) {
        const double t = t_min + i * dt;
        p.grid[i] = t;
        p.diag[i] = 2.0 * idt2 - kappa * kappa;
        p.bdiag[i] = std::exp(2.0 * t);
        if (i + 1 < m)
            p.sub[i] = -idt2;
    }
    p.diag[0] = (1.0 + dt * c_left) * idt2 - 0.5 * kappa * kappa;
    p.bdiag[0] *= 0.5;
    if (right_robin) {
        p.diag[m - 1] = (1.0 - dt * c_right) * idt2 - 0.5 * kappa * kappa;
        p.bdiag[m - 1] *= 0.5;
    }
    return p;
}

// All eigenvalues of the symmetrized pencil, ascending.
std::vector<double> pencil_eigenvalues(const TridiagPencil& p)
{
    const int m = static_cast<int>(p.diag.size());
    Eigen::VectorXd d(m), s(std::max(m - 1, 1));
    for (int i = 0; i < m; ++i)
        d[i] = p.diag[i] / p.bdiag[i];
    for (int i = 0; i + 1 < m; ++i)
        s[i] = p.sub[i] / std::sqrt(p.bdiag[i] * p.bdiag[i + 1]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, s.head(m - 1), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw SolverError("tridiagonal eigensolver failed");
    return {es.eigenvalues().data(), es.eigenvalues().data() + m};
}

// Tridiagonal LU with partial pivoting (one fill-in superdiagonal).
struct TriLU {
    std::vector<double> dl, d, du, du2;
    std::vector<char> piv;
};

TriLU tri_factor(std::vector<double> dl, std::vector<double> d, std::vector<double> du)
{
    const int n = static_cast<int>(d.size());
    TriLU f;
    f.du2.assign(std::max(n - 2, 0), 0.0);
    f.piv.assign(std::max(n - 1, 0), 0);
    for (int i = 0; i < n - 1; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            const double m = (d[i] != 0.0) ? dl[i] / d[i] : 0.0;
            dl[i] = m;
            d[i + 1] -= m * du[i];
        } else {
            f.piv[i] = 1;
            const double m = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = m;
            const double t = du[i];
            du[i] = d[i + 1];
            d[i + 1] = t - m * d[i + 1];
            if (i + 2 < n) {
                f.du2[i] = du[i + 1];
                du[i + 1] = -m * du[i + 1];
            }
        }
    }
    f.dl = std::move(dl);
    f.d = std::move(d);
    f.du = std::move(du);
    return f;
}

std::vector<double> tri_solve(const TriLU& f, std::vector<double> b)
{
    const int n = static_cast<int>(f.d.size());
    for (int i = 0; i < n - 1; ++i) {
        if (f.piv[i])
            std::swap(b[i], b[i + 1]);
        b[i + 1] -= f.dl[i] * b[i];
    }
    b[n - 1] /= f.d[n - 1];
    if (n >= 2)
        b[n - 2] = (b[n - 2] - f.du[n - 2] * b[n - 1]) / f.d[n - 2];
    for (int i = n - 3; i >= 0; --i)
        b[i] = (b[i] - f.du[i] * b[i + 1] - f.du2[i] * b[i + 2]) / f.d[i];
    return b;
}

// Inverse iteration for the pencil eigenvector at an isolated eigenvalue.
std::vector<double> pencil_eigenvector(const TridiagPencil& p, double lambda)
{
    const int n = static_cast<int>(p.diag.size());
    const double shift = lambda * (1.0 + 1e-11);
    std::vector<double> dl(n - 1), d(n), du(n - 1);
    for (int i = 0; i < n; ++i)
        d[i] = p.diag[i] - shift * p.bdiag[i];
    for (int i = 0; i + 1 < n; ++i)
        dl[i] = du[i] = p.sub[i];
    const TriLU f = tri_factor(dl, d, du);
    std::vector<double> x(n, 1.0);
    for (int it = 0; it < 4; ++it) {
        std::vector<double> rhs(n);
        for (int i = 0; i < n; ++i)
            rhs[i] = p.bdiag[i] * x[i];
        x = tri_solve(f, rhs);
        double nrm = 0.0;
        for (int i = 0; i < n; ++i)
            nrm += p.bdiag[i] * x[i] * x[i];
        nrm = std::sqrt(nrm);
        for (double& v : x)
            v /= nrm;
    }
    return x;
}

double phase_slope(const CornerData& c, double t)
{
    const double arg = c.kappa * (t - std::log(2.0)) + c.gamma;
    const double s = std::sin(arg);
    if (std::abs(s) < 1e-3)
        throw InvalidParameterError(
            "phase boundary condition degenerate at r_min; perturb r_min");
    return c.kappa * std::cos(arg) / s;
}

} // namespace

HalfLineLadder halfline_ladder(const CornerData& corner, int k_min, int k_max)
{
    if (k_max < k_min)
        throw InvalidParameterError("halfline_ladder: empty index range");
    HalfLineLadder l;
    l.corner = corner;
    l.k_min = k_min;
    l.k_max = k_max;
    l.ratio = std::exp(kPi / corner.kappa);
    for (int k = k_min; k <= k_max; ++k) {
        const double t = ladder_tau(corner, k);
        if (!std::isfinite(t) || t > 1e300)
            throw OverflowError("halfline_ladder: ladder entry overflows");
        l.tau.push_back(t);
        l.tau_doubled.push_back(2.0 * t);
    }
    return l;
}

HalfLineFdResult halfline_fd_oracle(const CornerData& corner, double r_min, double r_max,
                                    int n_points)
{
    if (!(r_min > 0.0) || !(r_max > r_min))
        throw InvalidParameterError("halfline_fd_oracle: need 0 < r_min < r_max");
    const double t_min = std::log(r_min);
    const double t_max = std::log(r_max);
    const double c_left = phase_slope(corner, t_min);
    const TridiagPencil p =
        assemble_log_grid(corner.kappa, t_min, t_max, n_points, c_left, false, 0.0);
    const std::vector<double> all = pencil_eigenvalues(p);

    // Keep only eigenvalues whose mode is localized well inside the grid:
    // the decay cutoff needs tau*r_max >> 1, the phase law tau*r_min << 1.
    const double tau_lo = 15.0 / r_max;
    const double tau_hi = 0.05 / r_min;
    HalfLineFdResult res;
    res.grid_t = p.grid;
    for (double lam : all) {
        if (lam >= 0.0)
            continue;
        const double tau = std::sqrt(-lam);
        if (tau >= tau_lo && tau <= tau_hi)
            res.tau.push_back(tau);
    }
    std::sort(res.tau.begin(), res.tau.end());
    const double q = std::exp(kPi / corner.kappa);
    for (std::size_t i = 0; i + 1 < res.tau.size(); ++i)
        if (res.tau[i + 1] / res.tau[i] < std::sqrt(q))
            throw ResolutionError(
                "halfline_fd_oracle: grid too coarse to separate ladder entries");
    for (double tau : res.tau)
        res.modes.push_back(pencil_eigenvector(p, -tau * tau));
    return res;
}

double interval_Q(const CornerData& corner, double tau, double delta,
                  const ScalarFn& alpha_fn)
{
    if (!(tau > 0.0) || !(delta > 0.0))
        throw InvalidParameterError("interval_Q: tau and delta must be positive");
    const double z = tau * delta;
    // Q ~ e^{-2z} drops below the double underflow threshold long before the
    // growing solution overflows, so the closure coefficient is exactly 0
    // there and the overflow guard never needs to trip.
    if (z > 340.0)
        return 0.0;
    const double alpha = alpha_fn ? alpha_fn(1.0 / tau) : 0.0;
    const double K = besselK_imag(corner.kappa, z);
    const double Kp = besselK_imag_deriv(corner.kappa, z);
    const double I = besselI_imag_real(corner.kappa, z);
    const double Ip = besselI_imag_real_deriv(corner.kappa, z);
    const double num = tau * Kp + (tau - alpha) * K;
    const double den = tau * Ip + (tau - alpha) * I;
    if (den == 0.0 || std::abs(den) < 1e-280 * std::max(1.0, std::abs(num)))
        throw SolverError("interval_Q: singular Robin closure");
    return num / den;
}

double interval_psi(const CornerData& corner, double tau, double delta,
                    const ScalarFn& alpha_fn)
{
    const double Q = interval_Q(corner, tau, delta, alpha_fn);
    const double A = Q * std::sinh(kPi * corner.kappa) / kPi;
    return std::atan(A);
}

const IntervalEntry& IntervalSpectrum::entry(int k) const
{
    for (const IntervalEntry& e : entries)
        if (e.k == k)
            return e;
    throw InvalidParameterError("IntervalSpectrum: index not present");
}

IntervalSpectrum interval_eigenvalues(const CornerData& corner, double delta,
                                      const ScalarFn& alpha_fn, int k_min, int k_max)
{
    if (!(delta > 0.0))
        throw InvalidParameterError("interval_eigenvalues: delta must be positive");
    if (k_max < k_min)
        throw InvalidParameterError("interval_eigenvalues: empty index range");
    IntervalSpectrum spec;
    spec.corner = corner;
    spec.delta = delta;
    spec.alpha_fn = alpha_fn;
    for (int k = k_min; k <= k_max; ++k) {
        IntervalEntry e;
        e.k = k;
        e.tau_closed = ladder_tau(corner, k);
        if (e.tau_closed * delta < 6.0)
            throw InvalidParameterError(
                "interval_eigenvalues: tau*delta too small for the Robin closure");
        double tau = e.tau_closed;
        bool converged = false;
        for (int it = 0; it < 100 && !converged; ++it) {
            const double psi = interval_psi(corner, tau, delta, alpha_fn);
            const double next =
                std::exp((corner.gamma_kappa + corner.gamma - psi + k * kPi) / corner.kappa);
            converged = std::abs(next - tau) <= 1e-13 * next;
            tau = next;
        }
        if (!converged)
            throw ConvergenceError("interval_eigenvalues: fixed point did not converge");
        e.tau_hat = tau;
        e.psi = interval_psi(corner, tau, delta, alpha_fn);
        e.residual = std::abs(corner.kappa * std::log(tau) -
                              (corner.gamma_kappa + corner.gamma - e.psi + k * kPi));
        // direct Robin defect of K(tau r) - Q Itilde(tau r) at r = delta
        const double Q = interval_Q(corner, tau, delta, alpha_fn);
        const double z = tau * delta;
        const double alpha = alpha_fn ? alpha_fn(1.0 / tau) : 0.0;
        double h = besselK_imag(corner.kappa, z);
        double hp = besselK_imag_deriv(corner.kappa, z);
        if (Q != 0.0) {
            h -= Q * besselI_imag_real(corner.kappa, z);
            hp -= Q * besselI_imag_real_deriv(corner.kappa, z);
        }
        hp *= tau;
        const double scale = std::abs(hp) + std::abs((tau - alpha) * h) + 1e-300;
        e.robin_residual = std::abs(hp + (tau - alpha) * h) / scale;
        spec.entries.push_back(e);
    }
    return spec;
}

double interval_eigenfunction_value(const IntervalSpectrum& spectrum, int k, double r)
{
    if (!(r > 0.0))
        throw DomainError("interval_eigenfunction_value: radius must be positive");
    const IntervalEntry& e = spectrum.entry(k);
    const double kappa = spectrum.corner.kappa;
    const double Q = interval_Q(spectrum.corner, e.tau_hat, spectrum.delta, spectrum.alpha_fn);
    const double z = e.tau_hat * r;
    double v = besselK_imag(kappa, z);
    if (Q != 0.0 && z < 700.0)
        v -= Q * besselI_imag_real(kappa, z);
    return v;
}

std::vector<double> interval_eigenfunction(const IntervalSpectrum& spectrum, int k,
                                           std::span<const double> r_samples)
{
    std::vector<double> out;
    out.reserve(r_samples.size());
    for (double r : r_samples)
        out.push_back(interval_eigenfunction_value(spectrum, k, r));
    return out;
}

double interval_fd_tau(const CornerData& corner, double delta, const ScalarFn& alpha_fn,
                       double r_min, int n_points, double tau_guess)
{
    if (!(r_min > 0.0) || !(delta > r_min))
        throw InvalidParameterError("interval_fd_tau: need 0 < r_min < delta");
    const double t_min = std::log(r_min);
    const double t_max = std::log(delta);
    const double c_left = phase_slope(corner, t_min);
    double tau = tau_guess;
    for (int outer = 0; outer < 6; ++outer) {
        const double alpha = alpha_fn ? alpha_fn(1.0 / tau) : 0.0;
        const double c_right = -delta * (tau - alpha);
        const TridiagPencil p =
            assemble_log_grid(corner.kappa, t_min, t_max, n_points, c_left, true, c_right);
        double best = 0.0;
        double dist = std::numeric_limits<double>::infinity();
        for (double lam : pencil_eigenvalues(p)) {
            if (lam >= 0.0)
                continue;
            const double t = std::sqrt(-lam);
            const double dd = std::abs(std::log(t / tau_guess));
            if (dd < dist) {
                dist = dd;
                best = t;
            }
        }
        if (best == 0.0)
            throw SolverError("interval_fd_tau: no negative eigenvalue near the guess");
        if (std::abs(best - tau) <= 1e-12 * tau)
            return best;
        tau = best;
    }
    return tau;
}

namespace {

// integral of fn(r)^2 r^{measure_power-1} dr over (0, delta), done in log
// radius where the oscillation rate is uniform. net_power is the decay rate
// of the whole integrand toward r = 0 and sets the truncation point.
double weighted_square_integral(const std::function<double(double)>& fn, double delta,
                                double measure_power, double net_power, double tau)
{
    const double t_hi = std::log(delta);
    const double t_lo = std::min(-std::log(tau), t_hi) - 39.0 / net_power;
    auto g = [&](double t) {
        const double r = std::exp(t);
        const double v = fn(r);
        return v * v * std::exp(measure_power * t);
    };
    return gauss_integrate_panels(g, t_lo, t_hi, 0.5, 16);
}

} // namespace

std::vector<double> moment_scalings(const IntervalSpectrum& spectrum, double beta,
                                    MomentKind kind)
{
    const double lower =
        (kind == MomentKind::L2) ? -1.0 : (kind == MomentKind::Grad ? 0.0 : 1.0);
    if (!(beta > lower))
        throw DomainError("moment_scalings: beta outside the validity range of this moment");
    const CornerData& c = spectrum.corner;
    std::vector<double> out;
    for (const IntervalEntry& e : spectrum.entries) {
        const double tau = e.tau_hat;
        const double Q = interval_Q(c, tau, spectrum.delta, spectrum.alpha_fn);
        auto phi = [&](double r) {
            const double z = tau * r;
            double v = besselK_imag(c.kappa, z);
            if (Q != 0.0 && z < 700.0)
                v -= Q * besselI_imag_real(c.kappa, z);
            return v;
        };
        auto dphi = [&](double r) {
            const double z = tau * r;
            double v = besselK_imag_deriv(c.kappa, z);
            if (Q != 0.0 && z < 700.0)
                v -= Q * besselI_imag_real_deriv(c.kappa, z);
            return tau * v;
        };
        auto ddphi = [&](double r) {
            // from the radial equation: phi'' = -phi'/r - (kappa/r)^2 phi + tau^2 phi
            const double k2 = c.kappa * c.kappa;
            return -dphi(r) / r - (k2 / (r * r)) * phi(r) + tau * tau * phi(r);
        };
        const double mp = 2.0 + 2.0 * beta;
        double value = 0.0;
        switch (kind) {
        case MomentKind::L2:
            value = weighted_square_integral(phi, spectrum.delta, mp, mp, tau) *
                    std::pow(tau, 2.0 + 2.0 * beta);
            break;
        case MomentKind::Grad:
            value = weighted_square_integral(dphi, spectrum.delta, mp, 2.0 * beta, tau) *
                    std::pow(tau, 2.0 * beta);
            break;
        case MomentKind::Hess:
            value = weighted_square_integral(ddphi, spectrum.delta, mp, 2.0 * beta - 2.0, tau) *
                    std::pow(tau, 2.0 * beta - 2.0);
            break;
        }
        out.push_back(value);
    }
    return out;
}

double besselK_imag_square_integral(double kappa)
{
    if (!(kappa > 0.0))
        throw InvalidParameterError("besselK_imag_square_integral: kappa must be positive");
    const double pk = kPi * kappa;
    return 0.5 * pk / std::sinh(pk);
}

double extension_constant(const ScalarFn& f, const CornerData& corner, double tau,
                          double tau_k, double r_max)
{
    if (!(tau > 0.0) || !(tau_k > 0.0) || !(r_max > 0.0))
        throw InvalidParameterError("extension_constant: positive tau, tau_k, r_max required");
    const double kappa = corner.kappa;
    if (tau == tau_k)
        throw SolverError("extension_constant: pole at tau = tau_k");
    if (kappa * std::abs(std::log(tau_k / tau)) >= kPi)
        throw DomainError("extension_constant: tau outside the ladder window");
    const double phase =
        std::sin(corner.gamma + corner.gamma_kappa - kappa * std::log(tau));
    if (std::abs(phase) < 1e-14)
        throw SolverError("extension_constant: pole at tau = tau_k");

    const double t_hi = std::log(r_max);
    const double t_lo = std::min(-std::log(tau), t_hi) - 20.0;
    auto g = [&](double t) {
        const double r = std::exp(t);
        return besselK_imag(kappa, tau * r) * f(r) * r * r;
    };
    const double integral = gauss_integrate_panels(g, t_lo, t_hi, 0.4, 16);
    const double amp = std::sqrt(kPi / (kappa * std::sinh(kPi * kappa)));
    return integral / (kappa * amp * phase);
}

} // namespace cornerspec
