#include "rieszlab/variance.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rieszlab/normal.hpp"

namespace rieszlab {

namespace {

// kron(u, v)(a * len(v) + c) = u(a) v(c)
Eigen::VectorXd kron_rows(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    Eigen::VectorXd out(u.size() * v.size());
    for (Eigen::Index a = 0; a < u.size(); ++a)
        out.segment(a * v.size(), v.size()) = u(a) * v;
    return out;
}

}  // namespace

PairAnalysis analyze_pair(const OrthoBasis& ortho_i, const OrthoBasis& ortho_j,
                          const RieszRepresentor& rep_i, const RieszRepresentor& rep_j,
                          MomentProvider& provider, double tol) {
    PairAnalysis pair;
    pair.i = ortho_i.space->unit;
    pair.j = ortho_j.space->unit;
    pair.tortho = second_order_gram_schmidt(*ortho_i.space, *ortho_j.space, provider, tol);
    pair.cross_i = ortho_i.gs.coeff * ortho_i.gram;
    pair.cross_j = ortho_j.gs.coeff * ortho_j.gram;
    pair.b_i = rep_i.onb_coeff;
    pair.b_j = rep_j.onb_coeff;
    pair.ortho_i = &ortho_i;
    pair.ortho_j = &ortho_j;
    return pair;
}

Eigen::VectorXd elementary_basis_values(const PairAnalysis& pair, int k, int l) {
    const double scale = pair.b_i(k) * pair.b_j(l);
    const Eigen::Index D = pair.tortho.gram4.rows();
    if (scale == 0.0) return Eigen::VectorXd::Zero(D);
    Eigen::VectorXd rho_pair = kron_rows(pair.ortho_i->gs.coeff.row(k).transpose(),
                                         pair.ortho_j->gs.coeff.row(l).transpose());
    Eigen::VectorXd second = pair.tortho.gram4 * rho_pair;  // E[rho_ik phi_ip rho_jl phi_jq]
    Eigen::VectorXd means = kron_rows(pair.cross_i.row(k).transpose(),
                                      pair.cross_j.row(l).transpose());
    return scale * (second - means);
}

Eigen::VectorXd diagonal_raw_basis_values(const PairAnalysis& pair, int k) {
    if (pair.i != pair.j)
        throw IndexOutOfRange("diagonal raw functional is defined on diagonal pairs only");
    Eigen::VectorXd rho_sq = kron_rows(pair.ortho_i->gs.coeff.row(k).transpose(),
                                       pair.ortho_i->gs.coeff.row(k).transpose());
    return pair.tortho.gram4 * rho_sq;  // E[rho_ik^2 phi_ip phi_iq]
}

Eigen::VectorXd variance_functional_basis_values(const PairAnalysis& pair,
                                                 const RieszRepresentor& rep_i,
                                                 const RieszRepresentor& rep_j) {
    Eigen::VectorXd beta_pair = kron_rows(rep_i.beta, rep_j.beta);
    Eigen::VectorXd second = pair.tortho.gram4 * beta_pair;
    Eigen::VectorXd mean_i = pair.ortho_i->gram * rep_i.beta;  // E[psi_i phi_ip]
    Eigen::VectorXd mean_j = pair.ortho_j->gram * rep_j.beta;
    return second - kron_rows(mean_i, mean_j);
}

double variance_functional_value(const PairAnalysis& pair, const RieszRepresentor& rep_i,
                                 const RieszRepresentor& rep_j, const Eigen::VectorXd& coeffs) {
    Eigen::VectorXd values = variance_functional_basis_values(pair, rep_i, rep_j);
    if (coeffs.size() != values.size())
        throw LengthMismatch("tensor coefficient length does not match the product basis");
    return coeffs.dot(values);
}

PairClassification classify_elementary(const PairAnalysis& pair, double rel_tol) {
    PairClassification out;
    out.i = pair.i;
    out.j = pair.j;
    out.pos.resize(pair.d_i(), pair.d_j());
    for (int k = 0; k < pair.d_i(); ++k) {
        for (int l = 0; l < pair.d_j(); ++l) {
            if (pair.b_i(k) == 0.0 || pair.b_j(l) == 0.0) {
                out.pos(k, l) = true;  // the zero functional
                continue;
            }
            Eigen::VectorXd values = elementary_basis_values(pair, k, l);
            double tol = rel_tol * (1.0 + values.cwiseAbs().maxCoeff());
            bool holds = true;
            for (int r : pair.tortho.null_set()) {
                if (std::abs(pair.tortho.gs.coeff.row(r).dot(values)) > tol) {
                    holds = false;
                    break;
                }
            }
            out.pos(k, l) = holds;
        }
    }
    return out;
}

VarianceBoundSpec assemble_bound(const std::vector<PairClassification>& classifications,
                                 const std::vector<std::pair<int, int>>& skipped, int n,
                                 const std::vector<int>& dims,
                                 const std::vector<const PairAnalysis*>& pair_index) {
    VarianceBoundSpec spec;
    spec.skipped = skipped;
    spec.Q.resize(static_cast<std::size_t>(n));
    spec.d_indicator.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        spec.Q[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(dims[static_cast<std::size_t>(i)]), 0);
        spec.d_indicator[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(dims[static_cast<std::size_t>(i)]), 1);
    }

    // Q_{i,k} counts, over both orientations of every active pair, the
    // elementary functionals rooted at (i, k) that fail positivity.
    // Skipped pairs carry the zero functional and never contribute.
    for (const PairClassification& cls : classifications) {
        for (int k = 0; k < cls.pos.rows(); ++k)
            for (int l = 0; l < cls.pos.cols(); ++l) {
                if (cls.pos(k, l)) continue;
                ++spec.Q[static_cast<std::size_t>(cls.i)][static_cast<std::size_t>(k)];
                if (cls.i != cls.j) ++spec.Q[static_cast<std::size_t>(cls.j)][static_cast<std::size_t>(l)];
            }
        if (cls.i == cls.j)
            for (int k = 0; k < cls.pos.rows(); ++k)
                spec.d_indicator[static_cast<std::size_t>(cls.i)][static_cast<std::size_t>(k)] =
                    cls.pos(k, k) ? 1 : 0;
    }
    for (const auto& qrow : spec.Q)
        for (long long q : qrow) spec.sum_Q += q;

    for (std::size_t idx = 0; idx < classifications.size(); ++idx) {
        const PairClassification& cls = classifications[idx];
        PairBound bound;
        bound.i = cls.i;
        bound.j = cls.j;
        for (int k = 0; k < cls.pos.rows(); ++k)
            for (int l = 0; l < cls.pos.cols(); ++l)
                if (cls.pos(k, l)) bound.terms.push_back({BoundTerm::Type::Elementary, k, l, 1.0});
        if (cls.i == cls.j) {
            const auto& Q = spec.Q[static_cast<std::size_t>(cls.i)];
            const auto& dind = spec.d_indicator[static_cast<std::size_t>(cls.i)];
            const Eigen::VectorXd& b = pair_index[idx]->b_i;
            for (int k = 0; k < cls.pos.rows(); ++k) {
                if (Q[static_cast<std::size_t>(k)] == 0) continue;
                double q = static_cast<double>(Q[static_cast<std::size_t>(k)]);
                if (dind[static_cast<std::size_t>(k)] == 1) {
                    bound.terms.push_back({BoundTerm::Type::Elementary, k, k, q});
                } else {
                    // V_{i,i,k,k} violates positivity; its raw-moment
                    // dominator is b_{i,k}^2 E[rho_{i,k}^2 u v].
                    bound.terms.push_back(
                        {BoundTerm::Type::DiagonalRaw, k, k, q * b(k) * b(k)});
                }
            }
        }
        spec.pair_bounds.push_back(std::move(bound));
    }
    return spec;
}

Eigen::VectorXd bound_basis_values(const PairBound& bound, const PairAnalysis& pair) {
    Eigen::VectorXd values = Eigen::VectorXd::Zero(pair.tortho.gram4.rows());
    for (const BoundTerm& term : bound.terms) {
        if (term.weight == 0.0) continue;
        if (term.type == BoundTerm::Type::Elementary)
            values += term.weight * elementary_basis_values(pair, term.k, term.l);
        else
            values += term.weight * diagonal_raw_basis_values(pair, term.k);
    }
    return values;
}

SecondOrderRepresentor build_second_order_representor(const PairBound& bound,
                                                      const PairAnalysis& pair, double rel_tol) {
    Eigen::VectorXd values = bound_basis_values(bound, pair);
    double tol = rel_tol * (1.0 + (values.size() > 0 ? values.cwiseAbs().maxCoeff() : 0.0));
    for (int r : pair.tortho.null_set()) {
        double v = pair.tortho.gs.coeff.row(r).dot(values);
        if (std::abs(v) > tol) {
            PositivityReport report;
            report.holds = false;
            report.witnesses.emplace_back(r, v);
            report.tolerance = tol;
            throw PositivityViolated("assembled bound functional fails second-order positivity",
                                     report);
        }
    }
    SecondOrderRepresentor rep;
    rep.i = bound.i;
    rep.j = bound.j;
    rep.coeffs = Eigen::VectorXd::Zero(values.size());
    for (int r : pair.tortho.basis_set()) {
        double br = pair.tortho.gs.coeff.row(r).dot(values);
        if (br != 0.0) rep.coeffs += br * pair.tortho.gs.coeff.row(r).transpose();
    }
    return rep;
}

double SecondOrderRepresentor::evaluate(const ModelSpace& space_i, const ModelSpace& space_j,
                                        const Assignment& z) const {
    Eigen::VectorXd phi_i(space_i.dimension()), phi_j(space_j.dimension());
    for (int p = 0; p < space_i.dimension(); ++p)
        phi_i(p) = space_i.basis[static_cast<std::size_t>(p)].eval(z);
    for (int q = 0; q < space_j.dimension(); ++q)
        phi_j(q) = space_j.basis[static_cast<std::size_t>(q)].eval(z);
    return evaluate(phi_i, phi_j);
}

double SecondOrderRepresentor::evaluate(const Eigen::VectorXd& phi_i,
                                        const Eigen::VectorXd& phi_j) const {
    double acc = 0.0;
    for (Eigen::Index p = 0; p < phi_i.size(); ++p) {
        if (phi_i(p) == 0.0) continue;
        acc += phi_i(p) * coeffs.segment(p * phi_j.size(), phi_j.size()).dot(phi_j);
    }
    return acc;
}

VarianceEstimate variance_estimate(const std::vector<SecondOrderRepresentor>& so_reps,
                                   const std::vector<ModelSpace>& spaces, const Assignment& z,
                                   const std::vector<double>& outcomes,
                                   const std::vector<std::pair<int, int>>& skipped) {
    const int n = static_cast<int>(spaces.size());
    if (outcomes.size() != spaces.size())
        throw LengthMismatch("need one outcome per unit");

    std::vector<Eigen::VectorXd> phi(spaces.size());
    for (std::size_t i = 0; i < spaces.size(); ++i) {
        phi[i].resize(spaces[i].dimension());
        for (int p = 0; p < spaces[i].dimension(); ++p)
            phi[i](p) = spaces[i].basis[static_cast<std::size_t>(p)].eval(z);
    }

    VarianceEstimate est;
    est.skipped_count = skipped.size();
    est.pair_terms.reserve(so_reps.size());
    est.stored_pairs.reserve(so_reps.size());
    double acc = 0.0;
    for (const SecondOrderRepresentor& rep : so_reps) {
        double term = rep.evaluate(phi[static_cast<std::size_t>(rep.i)],
                                   phi[static_cast<std::size_t>(rep.j)]) *
                      outcomes[static_cast<std::size_t>(rep.i)] *
                      outcomes[static_cast<std::size_t>(rep.j)];
        est.pair_terms.push_back(term);
        est.stored_pairs.emplace_back(rep.i, rep.j);
        // stored pairs have i <= j; the (j, i) orientation contributes the
        // same value, so off-diagonal terms count twice
        acc += rep.i == rep.j ? term : 2.0 * term;
    }
    est.value = acc / (static_cast<double>(n) * static_cast<double>(n));
    return est;
}

ConfidenceInterval confidence_interval(double estimate, double variance_value, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidAlpha("alpha must lie in (0, 1)");
    ConfidenceInterval ci;
    ci.center = estimate;
    ci.alpha = alpha;
    ci.clamped = variance_value < 0.0;
    ci.radius = normal_quantile(1.0 - alpha / 2.0) * std::sqrt(std::max(variance_value, 0.0));
    return ci;
}

std::vector<std::pair<int, int>> second_order_neighbor_skip(const std::vector<ModelSpace>& spaces,
                                                            const Design& design) {
    std::vector<std::pair<int, int>> skipped;
    if (!design.independent_coordinates()) return skipped;  // conservative fallback
    std::vector<std::set<int>> supports;
    supports.reserve(spaces.size());
    for (const auto& space : spaces) {
        auto u = space.support_union();
        supports.emplace_back(u.begin(), u.end());
    }
    const int n = static_cast<int>(spaces.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            bool disjoint = true;
            for (int c : supports[static_cast<std::size_t>(i)])
                if (supports[static_cast<std::size_t>(j)].count(c)) {
                    disjoint = false;
                    break;
                }
            if (disjoint) skipped.emplace_back(i, j);
        }
    return skipped;
}

}  // namespace rieszlab
