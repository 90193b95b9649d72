#ifndef RIESZLAB_RIESZ_HPP
#define RIESZLAB_RIESZ_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

#include "rieszlab/positivity.hpp"

namespace rieszlab {

struct PositivityViolated : Error {
    PositivityViolated(std::string message, PositivityReport r)
        : Error(std::move(message)), report(std::move(r)) {}
    PositivityReport report;
};

// psi_i expressed in the original basis: psi_i = sum_l beta(l) phi_{i,l}.
// onb_coeff(k) keeps theta(rho_k) for k in B_o (zero elsewhere); the
// variance decomposition consumes these.
struct RieszRepresentor {
    int unit = 0;
    Eigen::VectorXd beta;
    Eigen::VectorXd onb_coeff;
    std::string functional_label;

    double evaluate(const ModelSpace& space, const Assignment& z) const;
};

struct Estimate {
    double value = 0.0;
    std::vector<double> unit_terms;  // psi_i(Z) * Y_i
    Assignment assignment;
    std::vector<double> outcomes;
};

// Builds the representor psi = sum_{k in B_o} theta(rho_k) rho_k, folded
// into original-basis coefficients. Positivity is enforced unless
// `override_positivity` is set (research use); violations throw
// PositivityViolated carrying the report.
RieszRepresentor build_representor(const OrthoBasis& ortho, const EffectFunctional& functional,
                                   bool override_positivity = false,
                                   double positivity_tol = kDefaultPositivityTol);

// tau_hat = n^{-1} sum_i psi_i(Z) Y_i with per-unit terms retained.
Estimate point_estimate(const std::vector<RieszRepresentor>& reps,
                        const std::vector<ModelSpace>& spaces, const Assignment& z,
                        const std::vector<double>& outcomes);

struct PluginEstimate {
    std::vector<double> alpha;  // coefficients over B_o rows, zero elsewhere
    double effect = 0.0;
};

// The plug-in view: alpha_l = Y * rho_l(Z), effect = sum_l alpha_l
// theta(rho_l); equal to psi(Z) * Y by construction.
PluginEstimate plugin_outcome_estimate(const OrthoBasis& ortho, const EffectFunctional& functional,
                                       const Assignment& z, double outcome);

}  // namespace rieszlab

#endif
