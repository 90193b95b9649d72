#ifndef RIESZLAB_ORTHOGONALIZE_HPP
#define RIESZLAB_ORTHOGONALIZE_HPP

#include <Eigen/Core>
#include <vector>

#include "rieszlab/basis.hpp"
#include "rieszlab/moments.hpp"

namespace rieszlab {

constexpr double kDefaultOrthoTol = 1e-10;

// Output of the modified Gram-Schmidt pass over a Gram matrix: row k of
// `coeff` expresses rho_k in the original basis. basis_set indexes the
// orthonormal rows (the outcome-space basis), null_set the unnormalized
// spanning set of the design-null subspace.
struct GramSchmidtResult {
    Eigen::MatrixXd coeff;
    std::vector<int> basis_set;  // B_o
    std::vector<int> null_set;   // B_z
    double tol = kDefaultOrthoTol;
};

// Runs the modified Gram-Schmidt recursion in coefficient space against a
// (possibly singular) Gram matrix. A direction is declared null when its
// residual squared norm is <= tol * max(1, gram(t,t)). One
// re-orthogonalization pass guards against drift near the null threshold.
GramSchmidtResult orthonormalize_gram(const Eigen::MatrixXd& gram, double tol = kDefaultOrthoTol);

// First-order orthogonalization of a model space.
struct OrthoBasis {
    const ModelSpace* space = nullptr;
    Eigen::MatrixXd gram;  // G(t,s) = E[phi_t phi_s]
    GramSchmidtResult gs;

    int dimension() const { return static_cast<int>(gram.rows()); }
    const std::vector<int>& basis_set() const { return gs.basis_set; }
    const std::vector<int>& null_set() const { return gs.null_set; }

    // rho_k(z) = sum_s coeff(k,s) phi_s(z)
    double evaluate_rho(int k, const Assignment& z) const;
};

// Throws InexactMoments when the provider is Monte Carlo.
OrthoBasis gram_schmidt(const ModelSpace& space, MomentProvider& provider,
                        double tol = kDefaultOrthoTol);

// Second-order orthogonalization of the tensor space M_i (x) M_j. Product
// basis element (l, k) occupies flat index l * d_j + k; sigma_r =
// sum_{l,k} coeff(r, l*d_j+k) phi_{i,l} phi_{j,k}.
struct TensorOrthoBasis {
    const ModelSpace* space_i = nullptr;
    const ModelSpace* space_j = nullptr;
    Eigen::MatrixXd gram4;  // E[(phi_il phi_jk)(phi_ip phi_jq)] over flat indices
    GramSchmidtResult gs;

    int d_i() const { return space_i->dimension(); }
    int d_j() const { return space_j->dimension(); }
    int flat(int l, int k) const { return l * d_j() + k; }

    const std::vector<int>& basis_set() const { return gs.basis_set; }
    const std::vector<int>& null_set() const { return gs.null_set; }

    double evaluate_sigma(int r, const Assignment& z) const;
};

TensorOrthoBasis second_order_gram_schmidt(const ModelSpace& space_i, const ModelSpace& space_j,
                                           MomentProvider& provider, double tol = kDefaultOrthoTol);

}  // namespace rieszlab

#endif
