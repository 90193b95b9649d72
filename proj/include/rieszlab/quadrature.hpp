#ifndef RIESZLAB_QUADRATURE_HPP
#define RIESZLAB_QUADRATURE_HPP

#include <vector>

namespace rieszlab {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre nodes/weights on [-1, 1]; exact for polynomials of
// degree <= 2n - 1.
QuadratureRule gauss_legendre(int n);

// Gauss-Chebyshev (second kind) rule that integrates against the Wigner
// semicircle density (2/pi) sqrt(1 - x^2) on [-1, 1]; weights sum to 1.
QuadratureRule gauss_chebyshev_u(int n);

constexpr int kQuadratureNodes = 64;

// Expectation of f under uniform(a, b) via the 64-node Legendre rule.
double integrate_uniform(double a, double b, const std::vector<double>& values_at_nodes);

// Cached 64-node rules.
const QuadratureRule& legendre64();
const QuadratureRule& chebyshev_u64();

}  // namespace rieszlab

#endif
