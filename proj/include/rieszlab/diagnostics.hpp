#ifndef RIESZLAB_DIAGNOSTICS_HPP
#define RIESZLAB_DIAGNOSTICS_HPP

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "rieszlab/riesz.hpp"

namespace rieszlab {

// The variance-characterizing matrix H over the orthonormal (B_o)
// dimensions, flattened unit-major: row index = row_offset[i] + position
// of l within B_o(i). Null directions carry no variance and are omitted.
struct VarianceMatrix {
    Eigen::MatrixXd H;
    std::vector<std::pair<int, int>> index;  // (unit, basis index l) per row
    std::vector<int> row_offset;             // per unit
    Eigen::VectorXd eigenvalues;             // ascending
    Eigen::MatrixXd eigenvectors;

    double lambda_max() const { return eigenvalues.size() ? eigenvalues(eigenvalues.size() - 1) : 0.0; }
    double lambda_min() const { return eigenvalues.size() ? eigenvalues(0) : 0.0; }

    // A factor F with F' F = PSD completion of H (negative roundoff
    // eigenvalues clipped to zero).
    Eigen::MatrixXd factor() const;
};

// Assembles H_{(i,l),(j,k)} = Cov(rho_{i,l} psi_i, rho_{j,k} psi_j).
// Cross-blocks of units that are design-independent with disjoint
// supports are zero and skipped. Throws InexactMoments for Monte Carlo
// providers.
VarianceMatrix variance_matrix(const std::vector<OrthoBasis>& orthos,
                               const std::vector<RieszRepresentor>& reps,
                               MomentProvider& provider);

// Orthonormal-basis coefficients of y = sum_s coeffs[s] phi_s: a_l =
// E[y rho_l], for every l (null rows evaluate to zero).
Eigen::VectorXd onb_coefficients(const OrthoBasis& ortho, const Eigen::VectorXd& coeffs);

// Var(tau_hat) = alpha' H alpha / n with alpha = a / sqrt(n), where `a`
// stacks the per-unit orthonormal coefficients in H's row order.
double exact_variance_quadratic(const VarianceMatrix& H, const Eigen::VectorXd& a);

// ||D|| = sqrt(lambda_max(H)).
double operator_norm(const VarianceMatrix& H);

// Worst-case RMSE over the mean-square ball of radius C.
double worst_case_rmse(double opnorm, double C, int n);

// n^{-1/2} sqrt(davg) ||y||_{max,p} ||psi||_{max,q} with 1/p + 1/q = 1/2.
double consistency_bound(double davg, double maxp_outcome, double maxq_rep, int n, double p,
                         double q);

// The variance-estimator variant: p >= 4, q >= 2, 1/p + 1/(2q) = 1/4.
bool variance_conjugate_pair_ok(double p, double q);

// max_i E[|y_i(Z)|^p]^{1/p} for y_i given in each unit's original basis.
double max_p_norm(const std::vector<ModelSpace>& spaces,
                  const std::vector<std::vector<double>>& coeffs, const Design& design, double p);

struct DiagnosticsReport {
    double opnorm = 0.0;
    double davg = 0.0;
    int dmax = 0;
    double savg = 0.0;
    double maxp_outcome = 0.0;
    double maxq_representor = 0.0;
    double norm_p = 4.0;
    double norm_q = 4.0;
    double consistency_rmse_bound = 0.0;
    double worst_case_rmse_bound = 0.0;
    double exact_variance = 0.0;        // at the declared truth, when available
    bool non_degenerate = false;        // n Var >= c
    double non_degeneracy_c = 0.0;
    double dmax_rate_ratio = 0.0;       // dmax / n^{1/4}
};

}  // namespace rieszlab

#endif
