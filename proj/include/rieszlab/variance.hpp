#ifndef RIESZLAB_VARIANCE_HPP
#define RIESZLAB_VARIANCE_HPP

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "rieszlab/neighborhoods.hpp"
#include "rieszlab/riesz.hpp"

namespace rieszlab {

// Everything the variance decomposition needs about one ordered pair
// (i, j): the tensor orthogonalization, the first-order coefficient
// matrices, and the representors' orthonormal-basis coefficients.
struct PairAnalysis {
    int i = 0;
    int j = 0;
    TensorOrthoBasis tortho;
    Eigen::MatrixXd cross_i;  // E[rho_{i,k} phi_{i,p}] = (A_i G_i)(k,p)
    Eigen::MatrixXd cross_j;
    Eigen::VectorXd b_i;      // theta(rho_{i,k})
    Eigen::VectorXd b_j;
    const OrthoBasis* ortho_i = nullptr;
    const OrthoBasis* ortho_j = nullptr;

    int d_i() const { return static_cast<int>(cross_i.rows()); }
    int d_j() const { return static_cast<int>(cross_j.rows()); }
};

PairAnalysis analyze_pair(const OrthoBasis& ortho_i, const OrthoBasis& ortho_j,
                          const RieszRepresentor& rep_i, const RieszRepresentor& rep_j,
                          MomentProvider& provider, double tol = kDefaultOrthoTol);

// Values of the elementary functional V_{i,j,k,l}(u (x) v) =
// b_{i,k} b_{j,l} Cov(rho_{i,k} u, rho_{j,l} v) on every product-basis
// element, flat index p * d_j + q.
Eigen::VectorXd elementary_basis_values(const PairAnalysis& pair, int k, int l);

// Values of D_{i,k}(u (x) v) = E[rho_{i,k}^2 u v] on the product basis;
// only defined on diagonal pairs. Always second-order positive.
Eigen::VectorXd diagonal_raw_basis_values(const PairAnalysis& pair, int k);

// Values of the full variance functional theta_{i,j}(u (x) v) =
// Cov(psi_i u, psi_j v) on the product basis (beta in the original basis).
Eigen::VectorXd variance_functional_basis_values(const PairAnalysis& pair,
                                                 const RieszRepresentor& rep_i,
                                                 const RieszRepresentor& rep_j);

// theta_{i,j} evaluated on a tensor given by flat product-basis
// coefficients. Throws InexactMoments if the provider backing `pair` was
// not exact (enforced upstream).
double variance_functional_value(const PairAnalysis& pair, const RieszRepresentor& rep_i,
                                 const RieszRepresentor& rep_j, const Eigen::VectorXd& coeffs);

// Pos_{i,j}: (k,l) entries whose elementary functional passes the
// second-order positivity test.
struct PairClassification {
    int i = 0;
    int j = 0;
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> pos;
};

PairClassification classify_elementary(const PairAnalysis& pair,
                                       double rel_tol = kDefaultPositivityTol);

struct BoundTerm {
    enum class Type { Elementary, DiagonalRaw } type = Type::Elementary;
    int k = 0;
    int l = 0;          // unused for DiagonalRaw
    double weight = 1.0;
};

struct PairBound {
    int i = 0;
    int j = 0;
    std::vector<BoundTerm> terms;
};

struct VarianceBoundSpec {
    std::vector<PairBound> pair_bounds;            // one per stored pair, i <= j
    std::vector<std::vector<long long>> Q;         // Q[i][k]
    std::vector<std::vector<int>> d_indicator;     // d[i][k] = 1{(k,k) in Pos_{i,i}}
    std::vector<std::pair<int, int>> skipped;      // ordered skipped pairs
    long long sum_Q = 0;
};

// Assembles the bound functionals from classifications of the active
// pairs (stored with i <= j; the transposed orientation is derived).
// Skipped pairs carry the zero functional and count as positive in Q.
// The diagonal raw-moment replacement carries weight Q_{i,k} b_{i,k}^2 so
// that it dominates the discarded V_{i,i,k,k} terms.
VarianceBoundSpec assemble_bound(const std::vector<PairClassification>& classifications,
                                 const std::vector<std::pair<int, int>>& skipped, int n,
                                 const std::vector<int>& dims,
                                 const std::vector<const PairAnalysis*>& pair_index);

// Values of B_{i,j} on the product basis.
Eigen::VectorXd bound_basis_values(const PairBound& bound, const PairAnalysis& pair);

// psi^B_{i,j} as coefficients over the product basis phi_{i,p} phi_{j,q}.
struct SecondOrderRepresentor {
    int i = 0;
    int j = 0;
    Eigen::VectorXd coeffs;  // flat p * d_j + q

    double evaluate(const ModelSpace& space_i, const ModelSpace& space_j,
                    const Assignment& z) const;
    // Fast path with per-unit basis evaluations precomputed.
    double evaluate(const Eigen::VectorXd& phi_i, const Eigen::VectorXd& phi_j) const;
};

// Folds B through the tensor orthonormal basis. A nonzero value on a
// null direction indicates an assembly bug and throws PositivityViolated.
SecondOrderRepresentor build_second_order_representor(const PairBound& bound,
                                                      const PairAnalysis& pair,
                                                      double rel_tol = kDefaultPositivityTol);

struct VarianceEstimate {
    double value = 0.0;                   // may be negative; clamped only at CI time
    std::vector<double> pair_terms;       // psi^B_{i,j}(Z) Y_i Y_j per stored pair
    std::vector<std::pair<int, int>> stored_pairs;
    std::size_t skipped_count = 0;
};

VarianceEstimate variance_estimate(const std::vector<SecondOrderRepresentor>& so_reps,
                                   const std::vector<ModelSpace>& spaces, const Assignment& z,
                                   const std::vector<double>& outcomes,
                                   const std::vector<std::pair<int, int>>& skipped);

struct ConfidenceInterval {
    double center = 0.0;
    double radius = 0.0;
    double alpha = 0.05;
    bool clamped = false;

    double lower() const { return center - radius; }
    double upper() const { return center + radius; }
};

ConfidenceInterval confidence_interval(double estimate, double variance_value, double alpha);

// Pairs (i, j), i != j, whose support unions are disjoint under a
// coordinate-independent design have theta_{i,j} identically zero and are
// skipped. Designs without declared independence skip nothing.
std::vector<std::pair<int, int>> second_order_neighbor_skip(const std::vector<ModelSpace>& spaces,
                                                            const Design& design);

}  // namespace rieszlab

#endif
