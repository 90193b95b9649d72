#include "rieszlab/positivity.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace rieszlab {

Eigen::VectorXd TensorFunctional::basis_values() const {
    Eigen::VectorXd v(rows() * cols());
    for (int p = 0; p < rows(); ++p)
        for (int q = 0; q < cols(); ++q) v(p * cols() + q) = on_basis(p, q);
    return v;
}

double TensorFunctional::on_coefficients(const Eigen::VectorXd& coeffs) const {
    return coeffs.dot(basis_values());
}

PositivityReport test_positivity(const OrthoBasis& ortho, const EffectFunctional& functional,
                                 double rel_tol) {
    const ModelSpace& space = *ortho.space;
    const int d = space.dimension();
    Eigen::VectorXd theta(d);
    double max_abs = 0.0;
    for (int s = 0; s < d; ++s) {
        theta(s) = functional.apply_to_basis(space, s);
        max_abs = std::max(max_abs, std::abs(theta(s)));
    }
    PositivityReport report;
    report.tolerance = rel_tol * (1.0 + max_abs);
    for (int k : ortho.null_set()) {
        double value = ortho.gs.coeff.row(k).dot(theta);
        if (std::abs(value) > report.tolerance) {
            report.holds = false;
            report.witnesses.emplace_back(k, value);
        }
    }
    return report;
}

std::pair<bool, double> test_strong_positivity(const ModelSpace& space, MomentProvider& provider,
                                               double rel_tol) {
    if (!provider.exact())
        throw InexactMoments("strong positivity test requires exact moments");
    const int d = space.dimension();
    Eigen::MatrixXd gram(d, d);
    for (int t = 0; t < d; ++t)
        for (int s = t; s < d; ++s) {
            double m = provider.value({&space.basis[static_cast<std::size_t>(t)],
                                       &space.basis[static_cast<std::size_t>(s)]});
            gram(t, s) = m;
            gram(s, t) = m;
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
    double lmin = solver.eigenvalues().minCoeff();
    double lmax = solver.eigenvalues().maxCoeff();
    return {lmin > rel_tol * lmax, lmin};
}

PositivityReport test_second_order_positivity(const TensorOrthoBasis& tortho,
                                              const TensorFunctional& functional,
                                              double rel_tol) {
    Eigen::VectorXd values = functional.basis_values();
    PositivityReport report;
    report.tolerance = rel_tol * (1.0 + values.cwiseAbs().maxCoeff());
    for (int r : tortho.null_set()) {
        double value = tortho.gs.coeff.row(r).dot(values);
        if (std::abs(value) > report.tolerance) {
            report.holds = false;
            report.witnesses.emplace_back(r, value);
        }
    }
    return report;
}

}  // namespace rieszlab
