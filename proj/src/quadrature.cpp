#include "cornerspec/quadrature.hpp"

#include "cornerspec/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace cornerspec {

namespace {

GaussRule build_gauss(int n)
{
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton iteration on Legendre polynomials, symmetric pairs.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

} // namespace

const GaussRule& gauss_legendre(int n)
{
    if (n < 1)
        throw InvalidParameterError("gauss_legendre: order must be >= 1");
    static std::mutex mtx;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, build_gauss(n)).first;
    return it->second;
}

double gauss_integrate(const std::function<double(double)>& f, double a, double b, int n)
{
    const GaussRule& rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

double gauss_integrate_panels(const std::function<double(double)>& f, double a, double b,
                              double panel, int n_per_panel)
{
    if (!(panel > 0.0))
        throw InvalidParameterError("gauss_integrate_panels: panel width must be positive");
    const int m = std::max(1, static_cast<int>(std::ceil((b - a) / panel)));
    const double h = (b - a) / m;
    double sum = 0.0;
    for (int j = 0; j < m; ++j)
        sum += gauss_integrate(f, a + j * h, a + (j + 1) * h, n_per_panel);
    return sum;
}

const std::vector<TriPoint>& tri_rule_deg5()
{
    // Radon's 7-point rule, exact through degree 5.
    static const double a = (6.0 + std::sqrt(15.0)) / 21.0;
    static const double b = (6.0 - std::sqrt(15.0)) / 21.0;
    static const double wa = (155.0 + std::sqrt(15.0)) / 2400.0;
    static const double wb = (155.0 - std::sqrt(15.0)) / 2400.0;
    static const std::vector<TriPoint> rule = {
        {1.0 / 3.0, 1.0 / 3.0, 9.0 / 80.0},
        {a, a, wa},
        {a, 1.0 - 2.0 * a, wa},
        {1.0 - 2.0 * a, a, wa},
        {b, b, wb},
        {b, 1.0 - 2.0 * b, wb},
        {1.0 - 2.0 * b, b, wb},
    };
    return rule;
}

std::vector<TriPoint> tri_rule_duffy(int n)
{
    // Collapse the unit square onto the triangle (0,0)-(1,0)-(0,1); the
    // Jacobian clusters points toward vertex 0, which receives the corner
    // of graded elements.
    const GaussRule& g = gauss_legendre(n);
    std::vector<TriPoint> rule;
    rule.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        const double u = 0.5 * (g.nodes[i] + 1.0);
        const double wu = 0.5 * g.weights[i];
        for (int j = 0; j < n; ++j) {
            const double v = 0.5 * (g.nodes[j] + 1.0);
            const double wv = 0.5 * g.weights[j];
            // (x, y) = (u(1-v), uv) maps [0,1]^2 onto the triangle with the
            // Jacobian u, clustering resolution toward vertex 0.
            TriPoint p;
            p.l1 = u * (1.0 - v);
            p.l2 = u * v;
            p.w = wu * wv * u;
            rule.push_back(p);
        }
    }
    // Normalize weights so they sum to 1/2 exactly in aggregate roundoff.
    double s = 0.0;
    for (const TriPoint& p : rule)
        s += p.w;
    const double scale = 0.5 / s;
    for (TriPoint& p : rule)
        p.w *= scale;
    return rule;
}

} // namespace cornerspec
