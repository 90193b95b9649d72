#include "rieszlab/orthogonalize.hpp"

#include <algorithm>
#include <cmath>

namespace rieszlab {

GramSchmidtResult orthonormalize_gram(const Eigen::MatrixXd& gram, double tol) {
    const int d = static_cast<int>(gram.rows());
    GramSchmidtResult out;
    out.tol = tol;
    out.coeff = Eigen::MatrixXd::Zero(d, d);

    // Rows of projected = coeff_row * gram for accepted orthonormal rows,
    // so projections cost O(d) each.
    Eigen::MatrixXd projected = Eigen::MatrixXd::Zero(d, d);

    for (int t = 0; t < d; ++t) {
        Eigen::VectorXd eta = Eigen::VectorXd::Unit(d, t);
        for (int pass = 0; pass < 2; ++pass) {
            for (int s : out.basis_set) {
                double prj = projected.row(s).dot(eta);
                eta -= prj * out.coeff.row(s).transpose();
            }
        }
        double norm2 = eta.dot(gram * eta);
        if (norm2 < 0.0) norm2 = 0.0;
        double scale = std::max(1.0, gram(t, t));
        if (norm2 > tol * scale) {
            out.coeff.row(t) = eta.transpose() / std::sqrt(norm2);
            projected.row(t) = out.coeff.row(t) * gram;
            out.basis_set.push_back(t);
        } else {
            // Null directions are kept raw (unnormalized), spanning the
            // design-null subspace.
            out.coeff.row(t) = eta.transpose();
            out.null_set.push_back(t);
        }
    }
    return out;
}

double OrthoBasis::evaluate_rho(int k, const Assignment& z) const {
    double acc = 0.0;
    for (int s = 0; s <= k; ++s) {
        double c = gs.coeff(k, s);
        if (c != 0.0) acc += c * space->basis[static_cast<std::size_t>(s)].eval(z);
    }
    return acc;
}

OrthoBasis gram_schmidt(const ModelSpace& space, MomentProvider& provider, double tol) {
    if (!provider.exact())
        throw InexactMoments("orthogonalization requires exact moments, not Monte Carlo");
    const int d = space.dimension();
    OrthoBasis out;
    out.space = &space;
    out.gram = Eigen::MatrixXd(d, d);
    for (int t = 0; t < d; ++t) {
        for (int s = t; s < d; ++s) {
            double m = provider.value({&space.basis[static_cast<std::size_t>(t)],
                                       &space.basis[static_cast<std::size_t>(s)]});
            out.gram(t, s) = m;
            out.gram(s, t) = m;
        }
    }
    out.gs = orthonormalize_gram(out.gram, tol);
    return out;
}

double TensorOrthoBasis::evaluate_sigma(int r, const Assignment& z) const {
    // Evaluate each unit's basis once, then the bilinear form.
    const int di = d_i(), dj = d_j();
    Eigen::VectorXd fi(di), fj(dj);
    for (int l = 0; l < di; ++l) fi(l) = space_i->basis[static_cast<std::size_t>(l)].eval(z);
    for (int k = 0; k < dj; ++k) fj(k) = space_j->basis[static_cast<std::size_t>(k)].eval(z);
    double acc = 0.0;
    for (int l = 0; l < di; ++l) {
        if (fi(l) == 0.0) continue;
        for (int k = 0; k < dj; ++k) acc += gs.coeff(r, flat(l, k)) * fi(l) * fj(k);
    }
    return acc;
}

TensorOrthoBasis second_order_gram_schmidt(const ModelSpace& space_i, const ModelSpace& space_j,
                                           MomentProvider& provider, double tol) {
    if (!provider.exact())
        throw InexactMoments("second-order orthogonalization requires exact moments");
    const int di = space_i.dimension();
    const int dj = space_j.dimension();
    const int D = di * dj;
    TensorOrthoBasis out;
    out.space_i = &space_i;
    out.space_j = &space_j;
    out.gram4 = Eigen::MatrixXd(D, D);
    for (int r1 = 0; r1 < D; ++r1) {
        int l = r1 / dj, k = r1 % dj;
        for (int r2 = r1; r2 < D; ++r2) {
            int p = r2 / dj, q = r2 % dj;
            double m = provider.value({&space_i.basis[static_cast<std::size_t>(l)],
                                       &space_j.basis[static_cast<std::size_t>(k)],
                                       &space_i.basis[static_cast<std::size_t>(p)],
                                       &space_j.basis[static_cast<std::size_t>(q)]});
            out.gram4(r1, r2) = m;
            out.gram4(r2, r1) = m;
        }
    }
    out.gs = orthonormalize_gram(out.gram4, tol);
    return out;
}

}  // namespace rieszlab
