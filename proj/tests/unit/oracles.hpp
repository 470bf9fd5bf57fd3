#pragma once

// Independent numerical oracles used by the test suites. These deliberately
// avoid the library's own evaluation paths: plain bisection, direct series
// with an Euler-Maclaurin tail, and extended-precision trapezoid sums.

#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracles {

// Bisection to an interval of width tol; f must change sign on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-14)
{
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0)
        return lo;
    if (fhi == 0.0)
        return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::runtime_error("bisect: no sign change on the bracket");
    for (int it = 0; it < 400 && (hi - lo) > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0)
            return mid;
        if ((fm > 0.0) == (fhi > 0.0)) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

// arg Gamma(1 + i y) = -euler*y + sum_{n>=1} (y/n - atan(y/n)), with the tail
// folded in by a midpoint integral plus the first Euler-Maclaurin correction.
inline long double arg_gamma_series(long double y)
{
    const long double euler = 0.57721566490153286060651209008240243L;
    const int N = 4000;
    long double s = -euler * y;
    for (int n = 1; n <= N; ++n)
        s += y / n - atanl(y / n);
    const long double M = N + 0.5L;
    // integral of (y/x - atan(y/x)) from M to infinity
    const long double tail =
        -y - (y * logl(M) - M * atanl(y / M) - 0.5L * y * logl(M * M + y * y));
    const long double fp = -y / (M * M) + y / (M * M + y * y);
    return s + tail + fp / 24.0L;
}

// K_{i kappa}(z) by extended-precision trapezoid on e^{-z cosh t} cos(kappa t).
inline long double besselK_quadrature(long double kappa, long double z)
{
    const long double T = acoshl(120.0L / z > 3.0L ? 120.0L / z : 3.0L);
    const long double h = 0.002L;
    long double sum = 0.5L * expl(-z);
    for (long double t = h; t <= T; t += h)
        sum += expl(-z * coshl(t)) * cosl(kappa * t);
    return sum * h;
}

} // namespace oracles
