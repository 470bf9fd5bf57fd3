#pragma once

#include "cornerspec/specfun.hpp"

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace cornerspec {

/// Orthonormal eigenbasis of the angular cross-section (0, alpha_star):
/// phi_0(theta) = cosh(kappa theta)/v0, phi_k(theta) = cos(mu_k theta)/vk.
/// Immutable after construction; safe for shared concurrent reads.
class AngularBasis {
public:
    explicit AngularBasis(CornerData corner, int n_modes = 16, int quad_order = 64);

    const CornerData& corner() const { return corner_; }
    int n_modes() const { return n_modes_; }

    /// Normalization constant vk (not squared).
    double norm(int k) const;

    /// phi_k(theta); theta must lie in [0, alpha_star].
    double eval(int k, double theta) const;

    /// Quadrature nodes/weights on (0, alpha_star) used by the projections.
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

    /// phi_0-coefficient of a trace sampled at the quadrature nodes.
    double project_h(std::span<const double> samples_at_nodes) const;

    /// phi_0-coefficient of a callable trace u(theta).
    double project_h(const std::function<double(double)>& u) const;

    /// L2(0, alpha_star) pairing of two callables by quadrature.
    double inner(const std::function<double(double)>& u,
                 const std::function<double(double)>& v) const;

private:
    CornerData corner_;
    int n_modes_;
    std::vector<double> norms_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Free-function form of AngularBasis::eval.
double basis_eval(const AngularBasis& basis, int k, double theta);

/// Element of the two-dimensional solution space spanned by
/// r^{+i kappa} cosh(kappa theta) and r^{-i kappa} cosh(kappa theta).
struct AngularWave {
    std::complex<double> a; // coefficient of r^{+i kappa}
    std::complex<double> b; // coefficient of r^{-i kappa}
};

/// Real standing wave sin(kappa log(r/2) + gamma) cosh(kappa theta)
/// expressed in the (a, b) coefficients; satisfies |a| = |b|.
AngularWave standing_wave(double kappa, double gamma);

/// Wronskian pairing q(w1, w2) evaluated at radius r by quadrature in theta.
/// Green's identity makes the value independent of r.
std::complex<double> symplectic_form(const AngularBasis& basis, const AngularWave& w1,
                                     const AngularWave& w2, double r);

} // namespace cornerspec
