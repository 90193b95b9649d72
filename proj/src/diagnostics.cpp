#include "rieszlab/diagnostics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <set>

namespace rieszlab {

Eigen::MatrixXd VarianceMatrix::factor() const {
    Eigen::VectorXd clipped = eigenvalues.cwiseMax(0.0).cwiseSqrt();
    return clipped.asDiagonal() * eigenvectors.transpose();
}

namespace {

bool units_independent(const ModelSpace& a, const ModelSpace& b, const Design& design) {
    if (!design.independent_coordinates()) return false;
    auto ua = a.support_union();
    auto ub = b.support_union();
    std::set<int> sa(ua.begin(), ua.end());
    for (int c : ub)
        if (sa.count(c)) return false;
    return true;
}

}  // namespace

VarianceMatrix variance_matrix(const std::vector<OrthoBasis>& orthos,
                               const std::vector<RieszRepresentor>& reps,
                               MomentProvider& provider) {
    if (!provider.exact()) throw InexactMoments("the variance matrix requires exact moments");
    const int n = static_cast<int>(orthos.size());

    VarianceMatrix out;
    out.row_offset.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out.row_offset[static_cast<std::size_t>(i)] = static_cast<int>(out.index.size());
        for (int l : orthos[static_cast<std::size_t>(i)].basis_set()) out.index.emplace_back(i, l);
    }
    const int total = static_cast<int>(out.index.size());
    out.H = Eigen::MatrixXd::Zero(total, total);

    for (int i = 0; i < n; ++i) {
        const OrthoBasis& oi = orthos[static_cast<std::size_t>(i)];
        const auto& bo_i = oi.basis_set();
        for (int j = i; j < n; ++j) {
            const OrthoBasis& oj = orthos[static_cast<std::size_t>(j)];
            const auto& bo_j = oj.basis_set();
            if (i != j && units_independent(*oi.space, *oj.space, provider.design())) continue;

            const int di = oi.dimension(), dj = oj.dimension();
            // gram4((a,b),(s,t)) = E[phi_ia phi_jb phi_is phi_jt]
            Eigen::MatrixXd gram4(di * dj, di * dj);
            for (int r1 = 0; r1 < di * dj; ++r1) {
                int a = r1 / dj, b = r1 % dj;
                for (int r2 = r1; r2 < di * dj; ++r2) {
                    int s = r2 / dj, t = r2 % dj;
                    double m = provider.value({&oi.space->basis[static_cast<std::size_t>(a)],
                                               &oj.space->basis[static_cast<std::size_t>(b)],
                                               &oi.space->basis[static_cast<std::size_t>(s)],
                                               &oj.space->basis[static_cast<std::size_t>(t)]});
                    gram4(r1, r2) = m;
                    gram4(r2, r1) = m;
                }
            }
            // E[rho_il phi_ia psi_j-side...]: fold beta through the 4-way gram.
            const Eigen::Index djx = dj;
            Eigen::VectorXd beta_pair(static_cast<Eigen::Index>(di) * djx);
            for (int a = 0; a < di; ++a)
                beta_pair.segment(a * djx, djx) =
                    reps[static_cast<std::size_t>(i)].beta(a) * reps[static_cast<std::size_t>(j)].beta;
            Eigen::VectorXd folded = gram4 * beta_pair;  // E[phi_ia phi_jb psi_i psi_j] flat (a,b)
            Eigen::MatrixXd folded_mat(di, dj);
            for (int a = 0; a < di; ++a) folded_mat.row(a) = folded.segment(a * djx, djx).transpose();
            // block(l,k) = rho_il' folded rho_jk - b_i(l) b_j(k)
            Eigen::MatrixXd block = oi.gs.coeff * folded_mat * oj.gs.coeff.transpose();

            for (std::size_t li = 0; li < bo_i.size(); ++li) {
                for (std::size_t kj = 0; kj < bo_j.size(); ++kj) {
                    int l = bo_i[li], k = bo_j[kj];
                    double value = block(l, k) -
                                   reps[static_cast<std::size_t>(i)].onb_coeff(l) *
                                       reps[static_cast<std::size_t>(j)].onb_coeff(k);
                    int row = out.row_offset[static_cast<std::size_t>(i)] + static_cast<int>(li);
                    int col = out.row_offset[static_cast<std::size_t>(j)] + static_cast<int>(kj);
                    out.H(row, col) = value;
                    out.H(col, row) = value;
                }
            }
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(out.H);
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();
    return out;
}

Eigen::VectorXd onb_coefficients(const OrthoBasis& ortho, const Eigen::VectorXd& coeffs) {
    return ortho.gs.coeff * ortho.gram * coeffs;
}

double exact_variance_quadratic(const VarianceMatrix& H, const Eigen::VectorXd& a) {
    if (a.size() != H.H.rows())
        throw LengthMismatch("coefficient vector does not match the H dimension");
    int n = H.row_offset.empty() ? 1 : static_cast<int>(H.row_offset.size());
    Eigen::VectorXd alpha = a / std::sqrt(static_cast<double>(n));
    return alpha.dot(H.H * alpha) / static_cast<double>(n);
}

double operator_norm(const VarianceMatrix& H) { return std::sqrt(std::max(0.0, H.lambda_max())); }

double worst_case_rmse(double opnorm, double C, int n) {
    return C * opnorm / std::sqrt(static_cast<double>(n));
}

double consistency_bound(double davg, double maxp_outcome, double maxq_rep, int n, double p,
                         double q) {
    if (std::abs(1.0 / p + 1.0 / q - 0.5) > 1e-12)
        throw InvalidConjugatePair("need 1/p + 1/q = 1/2");
    return std::sqrt(davg / static_cast<double>(n)) * maxp_outcome * maxq_rep;
}

bool variance_conjugate_pair_ok(double p, double q) {
    return p >= 4.0 && q >= 2.0 && std::abs(1.0 / p + 1.0 / (2.0 * q) - 0.25) <= 1e-12;
}

double max_p_norm(const std::vector<ModelSpace>& spaces,
                  const std::vector<std::vector<double>>& coeffs, const Design& design, double p) {
    if (spaces.size() != coeffs.size()) throw LengthMismatch("one coefficient vector per space");
    double worst = 0.0;
    for (std::size_t i = 0; i < spaces.size(); ++i) {
        const ModelSpace& space = spaces[i];
        const std::vector<double>& c = coeffs[i];
        auto y_abs_p = [&space, &c, p](const Assignment& z) {
            return std::pow(std::abs(space.evaluate(c, z)), p);
        };
        double m = expectation(design, y_abs_p, space.support_union());
        worst = std::max(worst, std::pow(m, 1.0 / p));
    }
    return worst;
}

}  // namespace rieszlab
