#ifndef RIESZLAB_ORACLE_HPP
#define RIESZLAB_ORACLE_HPP

#include <functional>
#include <utility>
#include <vector>

#include "rieszlab/basis.hpp"
#include "rieszlab/design.hpp"
#include "rieszlab/functionals.hpp"

namespace rieszlab {

// One covariance-style term of an assembled bound, handed to the oracle
// as plain closures so the oracle stays free of the orthogonalization and
// variance modules: value = weight * (E[f g] - E[f] E[g]) when
// subtract_means is set, weight * E[f g] otherwise.
struct OracleBoundTerm {
    double weight = 1.0;
    std::function<double(const Assignment&)> f;
    std::function<double(const Assignment&)> g;
    bool subtract_means = true;
};

struct OracleInput {
    const Design* design = nullptr;
    const std::vector<ModelSpace>* spaces = nullptr;
    const std::vector<EffectFunctional>* functionals = nullptr;
    const std::vector<std::vector<double>>* truth = nullptr;
    // psi_i evaluators from the pipeline under test (treated as black
    // boxes; every expectation below is an exhaustive weighted sum).
    std::vector<std::function<double(const Assignment&)>> psi;
    // V-hat^B evaluator (assignment, outcomes); may be empty.
    std::function<double(const Assignment&, const std::vector<double>&)> variance_estimator;
    // Terms of n^-2 sum_{i,j} B_{i,j}(y_i (x) y_j), pair multiplicity
    // already folded into the weights; may be empty.
    std::vector<OracleBoundTerm> bound_terms;
    double alpha = 0.05;
    std::size_t enumeration_cap = kDefaultEnumerationCap;
};

struct OracleResult {
    double estimand = 0.0;                // tau
    double mean_estimate = 0.0;           // E[tau_hat]
    double variance = 0.0;                // Var(tau_hat)
    double bound_value = 0.0;             // VB, from the term list
    double mean_variance_estimate = 0.0;  // E[V_hat^B]
    double coverage = 0.0;                // P(tau in CI) at level alpha
    double alpha = 0.05;
    bool has_variance_estimator = false;
    // Estimator distribution, equal values merged, ascending.
    std::vector<std::pair<double, double>> distribution;
};

// Exhaustive enumeration over the design's finite support with
// compensated accumulation. Shares only Assignment evaluation with the
// rest of the library. Throws UnsupportedDesign / DimensionTooLarge.
OracleResult oracle_run(const OracleInput& input);

// E[prod f] by plain enumeration; the cross-check for designs::moment.
double oracle_moment(const Design& design, const std::vector<const BasisFunction*>& factors,
                     std::size_t cap = kDefaultEnumerationCap);

}  // namespace rieszlab

#endif
