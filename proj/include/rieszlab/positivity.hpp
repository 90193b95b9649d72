#ifndef RIESZLAB_POSITIVITY_HPP
#define RIESZLAB_POSITIVITY_HPP

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "rieszlab/functionals.hpp"
#include "rieszlab/orthogonalize.hpp"

namespace rieszlab {

constexpr double kDefaultPositivityTol = 1e-8;
constexpr double kDefaultEigenTol = 1e-10;

struct PositivityReport {
    bool holds = true;
    // (null-direction index, functional value) for each violated direction.
    std::vector<std::pair<int, double>> witnesses;
    double tolerance = 0.0;
};

// A linear functional on the tensor space M_i (x) M_j, known through its
// values on the product basis phi_{i,p} (x) phi_{j,q}.
class TensorFunctional {
public:
    virtual ~TensorFunctional() = default;
    // theta(phi_{i,p} (x) phi_{j,q})
    virtual double on_basis(int p, int q) const = 0;
    virtual int rows() const = 0;  // d_i
    virtual int cols() const = 0;  // d_j

    // Values on all product-basis elements, flat index p * d_j + q.
    Eigen::VectorXd basis_values() const;
    // Linear extension to a tensor given by flat product-basis coefficients.
    double on_coefficients(const Eigen::VectorXd& coeffs) const;
};

// Dense value table, the common concrete case.
class TableTensorFunctional : public TensorFunctional {
public:
    explicit TableTensorFunctional(Eigen::MatrixXd values) : values_(std::move(values)) {}
    double on_basis(int p, int q) const override { return values_(p, q); }
    int rows() const override { return static_cast<int>(values_.rows()); }
    int cols() const override { return static_cast<int>(values_.cols()); }

private:
    Eigen::MatrixXd values_;
};

// Algorithm: theta vanishes (within a scale-aware tolerance) on every
// null-spanning direction iff positivity holds.
PositivityReport test_positivity(const OrthoBasis& ortho, const EffectFunctional& functional,
                                 double rel_tol = kDefaultPositivityTol);

// Strong positivity: smallest eigenvalue of the basis Gram matrix exceeds
// rel_tol times the largest. Returns (holds, smallest eigenvalue).
std::pair<bool, double> test_strong_positivity(const ModelSpace& space, MomentProvider& provider,
                                               double rel_tol = kDefaultEigenTol);

PositivityReport test_second_order_positivity(const TensorOrthoBasis& tortho,
                                              const TensorFunctional& functional,
                                              double rel_tol = kDefaultPositivityTol);

}  // namespace rieszlab

#endif
