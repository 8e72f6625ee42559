#include "cnsdg/quadrature.hpp"

#include "cnsdg/types.hpp"

#include <cmath>

namespace cnsdg {

namespace {

// Legendre P_n(x) and P_n'(x) on [-1, 1] by the three-term recurrence.
void legendre(int n, double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    if (n == 0) { p = p0; dp = 0.0; return; }
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
}

} // namespace

QuadRule1D gauss_rule(int n) {
    if (n < 1 || n > 8) throw UnsupportedOrderError("gauss_rule: n must be in [1, 8]");
    QuadRule1D rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    if (n == 1) {
        rule.points[0] = 0.0;
        rule.weights[0] = 1.0;
        return rule;
    }
    const double pi = std::acos(-1.0);
    for (int i = 0; i < n; ++i) {
        // Chebyshev-based initial guess, refined by Newton on P_n.
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double p, dp;
        for (int it = 0; it < 100; ++it) {
            legendre(n, x, p, dp);
            const double delta = p / dp;
            x -= delta;
            if (std::abs(delta) < 1e-15) break;
        }
        legendre(n, x, p, dp);
        rule.points[i] = 0.5 * x;
        rule.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp); // 2/((1-x^2)P'^2) scaled by 1/2
    }
    return rule;
}

QuadRule1D gauss_lobatto_rule(int n) {
    if (n < 2 || n > 6) throw UnsupportedOrderError("gauss_lobatto_rule: n must be in [2, 6]");
    QuadRule1D rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    const int m = n - 1;
    const double pi = std::acos(-1.0);
    rule.points.front() = -0.5;
    rule.points.back() = 0.5;
    // Interior nodes are roots of P_{n-1}'.
    for (int i = 1; i < n - 1; ++i) {
        double x = std::cos(pi * i / m); // descending guess; reordered below
        double p, dp;
        for (int it = 0; it < 100; ++it) {
            legendre(m, x, p, dp);
            const double d2p = (2.0 * x * dp - m * (m + 1.0) * p) / (1.0 - x * x);
            const double delta = dp / d2p;
            x -= delta;
            if (std::abs(delta) < 1e-15) break;
        }
        rule.points[n - 1 - i] = 0.5 * x;
    }
    for (int i = 0; i < n; ++i) {
        const double x = 2.0 * rule.points[i];
        double p, dp;
        legendre(m, x, p, dp);
        rule.weights[i] = 1.0 / (m * (m + 1.0) * p * p); // 2/(n(n-1)P^2) scaled by 1/2
    }
    return rule;
}

} // namespace cnsdg
