#include "rieszlab/quadrature.hpp"

#include <cmath>

namespace rieszlab {

QuadratureRule gauss_legendre(int n) {
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const double pi = std::acos(-1.0);
    // Newton iteration on P_n from the Chebyshev initial guess; the rule is
    // symmetric, so only half the roots are computed.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return rule;
}

QuadratureRule gauss_chebyshev_u(int n) {
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const double pi = std::acos(-1.0);
    for (int i = 1; i <= n; ++i) {
        double theta = pi * i / (n + 1.0);
        double s = std::sin(theta);
        rule.nodes[static_cast<std::size_t>(i - 1)] = std::cos(theta);
        // (pi / (n+1)) sin^2(theta) scaled by the density factor 2/pi.
        rule.weights[static_cast<std::size_t>(i - 1)] = 2.0 / (n + 1.0) * s * s;
    }
    return rule;
}

double integrate_uniform(double a, double b, const std::vector<double>& values_at_nodes) {
    const QuadratureRule& rule = legendre64();
    double acc = 0.0;
    for (std::size_t i = 0; i < values_at_nodes.size(); ++i) acc += rule.weights[i] * values_at_nodes[i];
    // Legendre weights sum to 2; the uniform density on [a, b] contributes
    // the Jacobian (b-a)/2 times 1/(b-a).
    (void)a;
    (void)b;
    return acc / 2.0;
}

const QuadratureRule& legendre64() {
    static const QuadratureRule rule = gauss_legendre(kQuadratureNodes);
    return rule;
}

const QuadratureRule& chebyshev_u64() {
    static const QuadratureRule rule = gauss_chebyshev_u(kQuadratureNodes);
    return rule;
}

}  // namespace rieszlab
