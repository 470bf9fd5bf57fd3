#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace cornerspec {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Returns the n-point Gauss-Legendre rule (cached, thread-safe).
const GaussRule& gauss_legendre(int n);

/// Integrates f over [a, b] with an n-point Gauss-Legendre rule.
double gauss_integrate(const std::function<double(double)>& f, double a, double b, int n);

/// Composite Gauss integration over [a, b] split into panels of width <= panel.
double gauss_integrate_panels(const std::function<double(double)>& f, double a, double b,
                              double panel, int n_per_panel = 16);

/// Quadrature point on the reference triangle (barycentric L1, L2; L3 = 1-L1-L2).
struct TriPoint {
    double l1, l2, w; // weight is relative to unit reference area 1/2
};

/// Degree-5 symmetric 7-point rule on the reference triangle.
const std::vector<TriPoint>& tri_rule_deg5();

/// Tensor (Duffy) rule with n*n points, collapsed toward vertex 0.
/// Handles smooth non-polynomial integrands; raise n for oscillatory ones.
std::vector<TriPoint> tri_rule_duffy(int n);

} // namespace cornerspec
