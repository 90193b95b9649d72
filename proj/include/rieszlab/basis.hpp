#ifndef RIESZLAB_BASIS_HPP
#define RIESZLAB_BASIS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rieszlab/design.hpp"

namespace rieszlab {

// One basis function phi with a stable identity (used as the moment cache
// key), the set of coordinates its value may depend on, and an optional
// analytic partial-derivative evaluator.
struct BasisFunction {
    std::string id;
    std::function<double(const Assignment&)> eval;
    std::vector<int> support;  // sorted coordinate indices; empty for constants
    std::function<double(const Assignment&, int)> deriv;  // d/dz_c at z; may be null

    double operator()(const Assignment& z) const { return eval(z); }
    bool smooth() const { return static_cast<bool>(deriv); }
};

// Ordered basis-function list declaring the span assumed to contain the
// unit's potential outcome function.
struct ModelSpace {
    int unit = 0;
    std::vector<BasisFunction> basis;

    int dimension() const { return static_cast<int>(basis.size()); }

    // phi_k(z), 0-based k. Throws IndexOutOfRange / LengthMismatch.
    double evaluate_basis(int k, const Assignment& z) const;

    // y(z) for y = sum_k coeffs[k] phi_k.
    double evaluate(const std::vector<double>& coeffs, const Assignment& z) const;

    // Union of the basis supports.
    std::vector<int> support_union() const;
};

// Built-in space constructors covering the worked examples.
ModelSpace sutva_space(int unit);
ModelSpace exposure_space(int unit, const std::vector<int>& neighbors);
ModelSpace linear_in_means_space(int unit, const std::vector<int>& neighbors);
ModelSpace polynomial_space(int unit, int degree);
ModelSpace chebyshev_space(int unit, int degree);

// Chebyshev polynomial of the second kind and its derivative, by the
// three-term recurrence (stable on all of [-1, 1]).
double chebyshev_u(int n, double x);
double chebyshev_u_derivative(int n, double x);

// Spot-check that each basis function depends only on its declared support:
// mixing off-support coordinates from a second draw must not change the
// value. Returns false on the first violation.
bool verify_support_declaration(const ModelSpace& space, const Design& design, int trials,
                                std::uint64_t seed);

}  // namespace rieszlab

#endif
