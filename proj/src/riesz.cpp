#include "rieszlab/riesz.hpp"

#include <string>

namespace rieszlab {

double RieszRepresentor::evaluate(const ModelSpace& space, const Assignment& z) const {
    double acc = 0.0;
    for (int l = 0; l < space.dimension(); ++l) {
        double b = beta(l);
        if (b != 0.0) acc += b * space.basis[static_cast<std::size_t>(l)].eval(z);
    }
    return acc;
}

RieszRepresentor build_representor(const OrthoBasis& ortho, const EffectFunctional& functional,
                                   bool override_positivity, double positivity_tol) {
    PositivityReport report = test_positivity(ortho, functional, positivity_tol);
    if (!report.holds && !override_positivity)
        throw PositivityViolated("effect functional does not vanish on the design-null subspace",
                                 report);

    const ModelSpace& space = *ortho.space;
    const int d = space.dimension();
    Eigen::VectorXd theta(d);
    for (int s = 0; s < d; ++s) theta(s) = functional.apply_to_basis(space, s);

    RieszRepresentor rep;
    rep.unit = space.unit;
    rep.functional_label = functional.label();
    rep.beta = Eigen::VectorXd::Zero(d);
    rep.onb_coeff = Eigen::VectorXd::Zero(d);
    for (int k : ortho.basis_set()) {
        double t_rho = ortho.gs.coeff.row(k).dot(theta);
        rep.onb_coeff(k) = t_rho;
        if (t_rho != 0.0) rep.beta += t_rho * ortho.gs.coeff.row(k).transpose();
    }
    return rep;
}

Estimate point_estimate(const std::vector<RieszRepresentor>& reps,
                        const std::vector<ModelSpace>& spaces, const Assignment& z,
                        const std::vector<double>& outcomes) {
    if (reps.size() != spaces.size() || reps.size() != outcomes.size())
        throw LengthMismatch("need one representor, one space and one outcome per unit");
    Estimate est;
    est.assignment = z;
    est.outcomes = outcomes;
    est.unit_terms.resize(reps.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        est.unit_terms[i] = reps[i].evaluate(spaces[i], z) * outcomes[i];
        acc += est.unit_terms[i];
    }
    est.value = acc / static_cast<double>(reps.size());
    return est;
}

PluginEstimate plugin_outcome_estimate(const OrthoBasis& ortho, const EffectFunctional& functional,
                                       const Assignment& z, double outcome) {
    const ModelSpace& space = *ortho.space;
    const int d = space.dimension();
    Eigen::VectorXd theta(d);
    for (int s = 0; s < d; ++s) theta(s) = functional.apply_to_basis(space, s);

    PluginEstimate out;
    out.alpha.assign(static_cast<std::size_t>(d), 0.0);
    for (int l : ortho.basis_set()) {
        double alpha_l = outcome * ortho.evaluate_rho(l, z);
        out.alpha[static_cast<std::size_t>(l)] = alpha_l;
        out.effect += alpha_l * ortho.gs.coeff.row(l).dot(theta);
    }
    return out;
}

}  // namespace rieszlab
