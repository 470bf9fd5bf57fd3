#include "cornerspec/angle_modes.hpp"

#include "cornerspec/errors.hpp"
#include "cornerspec/quadrature.hpp"

#include <cmath>

namespace cornerspec {

AngularBasis::AngularBasis(CornerData corner, int n_modes, int quad_order)
    : corner_(std::move(corner)), n_modes_(n_modes)
{
    if (n_modes < 1)
        throw InvalidParameterError("AngularBasis: need at least one mode");
    if (quad_order < 16)
        throw InvalidParameterError("AngularBasis: quadrature order too low");
    const double a = corner_.alpha_star;
    while (static_cast<int>(corner_.mu.size()) < n_modes)
        corner_.mu.push_back(
            solve_mu(a, corner_.rho0, static_cast<int>(corner_.mu.size()) + 1));

    norms_.resize(n_modes + 1);
    const double k = corner_.kappa;
    norms_[0] = std::sqrt(0.5 * a + std::sinh(2.0 * k * a) / (4.0 * k));
    for (int j = 1; j <= n_modes; ++j) {
        const double mu = corner_.mu[j - 1];
        const double sq = 0.5 * a + std::sin(2.0 * mu * a) / (4.0 * mu);
        if (!(sq > 0.0))
            throw InternalError("AngularBasis: non-positive normalization");
        norms_[j] = std::sqrt(sq);
    }

    const GaussRule& rule = gauss_legendre(quad_order);
    nodes_.resize(quad_order);
    weights_.resize(quad_order);
    for (int i = 0; i < quad_order; ++i) {
        nodes_[i] = 0.5 * a * (rule.nodes[i] + 1.0);
        weights_[i] = 0.5 * a * rule.weights[i];
    }
}

double AngularBasis::norm(int k) const
{
    if (k < 0 || k > n_modes_)
        throw InvalidParameterError("AngularBasis::norm: mode index out of range");
    return norms_[k];
}

double AngularBasis::eval(int k, double theta) const
{
    if (k < 0 || k > n_modes_)
        throw InvalidParameterError("AngularBasis::eval: mode index out of range");
    if (theta < -1e-14 || theta > corner_.alpha_star * (1.0 + 1e-14))
        throw DomainError("AngularBasis::eval: theta outside [0, alpha_star]");
    if (k == 0)
        return std::cosh(corner_.kappa * theta) / norms_[0];
    return std::cos(corner_.mu[k - 1] * theta) / norms_[k];
}

double AngularBasis::project_h(std::span<const double> samples_at_nodes) const
{
    if (samples_at_nodes.size() != nodes_.size())
        throw ResolutionError("project_h: sample count must match the quadrature nodes");
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        sum += weights_[i] * samples_at_nodes[i] * eval(0, nodes_[i]);
    return sum;
}

double AngularBasis::project_h(const std::function<double(double)>& u) const
{
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        sum += weights_[i] * u(nodes_[i]) * eval(0, nodes_[i]);
    return sum;
}

double AngularBasis::inner(const std::function<double(double)>& u,
                           const std::function<double(double)>& v) const
{
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        sum += weights_[i] * u(nodes_[i]) * v(nodes_[i]);
    return sum;
}

double basis_eval(const AngularBasis& basis, int k, double theta)
{
    return basis.eval(k, theta);
}

AngularWave standing_wave(double kappa, double gamma)
{
    // sin(kappa log(r/2) + gamma) = Im[e^{i gamma} (r/2)^{i kappa}]
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> half_pow = std::exp(-i * (kappa * std::log(2.0)));
    AngularWave w;
    w.a = std::exp(i * gamma) * half_pow / (2.0 * i);
    w.b = std::conj(w.a);
    return w;
}

std::complex<double> symplectic_form(const AngularBasis& basis, const AngularWave& w1,
                                     const AngularWave& w2, double r)
{
    if (!(r > 0.0))
        throw InvalidParameterError("symplectic_form: radius must be positive");
    const double kappa = basis.corner().kappa;
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> rp = std::exp(i * (kappa * std::log(r))); // r^{+i kappa}
    const std::complex<double> rm = 1.0 / rp;                            // r^{-i kappa}

    auto radial = [&](const AngularWave& w) { return w.a * rp + w.b * rm; };
    auto radial_deriv = [&](const AngularWave& w) {
        return (i * kappa / r) * (w.a * rp - w.b * rm);
    };
    const std::complex<double> f1 = radial(w1);
    const std::complex<double> d1 = radial_deriv(w1);
    const std::complex<double> f2c = std::conj(radial(w2));
    const std::complex<double> d2c = std::conj(radial_deriv(w2));

    double csum = 0.0;
    for (std::size_t j = 0; j < basis.nodes().size(); ++j) {
        const double c = std::cosh(kappa * basis.nodes()[j]);
        csum += basis.weights()[j] * c * c;
    }
    return (d1 * f2c - f1 * d2c) * r * csum;
}

} // namespace cornerspec
