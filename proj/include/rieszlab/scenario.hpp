#ifndef RIESZLAB_SCENARIO_HPP
#define RIESZLAB_SCENARIO_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rieszlab/diagnostics.hpp"
#include "rieszlab/oracle.hpp"
#include "rieszlab/variance.hpp"

namespace rieszlab {

struct MomentMode {
    bool exact = true;
    std::size_t sample_count = 0;      // monte carlo draws when !exact
};

struct Tolerances {
    double orthogonalization = kDefaultOrthoTol;
    double positivity = kDefaultPositivityTol;
    double eigen = kDefaultEigenTol;
};

// Parsed scenario: design + per-unit spaces + per-unit functionals +
// simulation truth, all from one JSON document.
struct ScenarioConfig {
    int n = 0;
    Design design = Design::bernoulli(1, 0.5);
    std::vector<ModelSpace> spaces;
    std::vector<EffectFunctional> functionals;
    std::vector<std::vector<double>> truth;  // empty when estimating from data
    std::uint64_t seed = 1;
    std::size_t replications = 1000;
    double alpha = 0.05;
    Tolerances tolerances;
    std::size_t enumeration_cap = kDefaultEnumerationCap;
    MomentMode moment_mode;
    bool positivity_override = false;
    bool with_variance = true;
    std::string output_format = "json";
    std::string data_file;  // observed-data reference for estimation

    static ScenarioConfig from_json_text(const std::string& text);
    static ScenarioConfig from_file(const std::string& path);
};

// The assembled estimation machinery for one scenario. Addresses of
// spaces/orthos are stable for the Pipeline's lifetime; pair analyses and
// representors point into them.
class Pipeline {
public:
    // Builds orthogonalizations, runs positivity, constructs representors
    // and (optionally) the full variance-bound machinery. Throws
    // PositivityViolated (with witnesses) unless the config overrides.
    static std::unique_ptr<Pipeline> build(ScenarioConfig config);

    const ScenarioConfig& config() const { return config_; }
    const Design& design() const { return config_.design; }
    const std::vector<ModelSpace>& spaces() const { return config_.spaces; }
    const std::vector<EffectFunctional>& functionals() const { return config_.functionals; }
    MomentProvider& provider() const { return *provider_; }

    const std::vector<OrthoBasis>& orthos() const { return orthos_; }
    const std::vector<PositivityReport>& positivity_reports() const { return positivity_; }
    const std::vector<RieszRepresentor>& representors() const { return reps_; }

    bool variance_ready() const { return variance_ready_; }
    const std::vector<std::pair<int, int>>& skipped_pairs() const { return skipped_; }
    const std::vector<PairAnalysis>& pair_analyses() const { return pairs_; }
    const std::vector<PairClassification>& classifications() const { return classifications_; }
    const VarianceBoundSpec& bound() const { return bound_; }
    const std::vector<SecondOrderRepresentor>& second_order_representors() const {
        return so_reps_;
    }

    // Replaces the simulation truth; the built machinery (orthos,
    // representors, bounds) does not depend on it. Call oracle_input
    // afterwards, not before.
    void set_truth(std::vector<std::vector<double>> truth);

    // tau at the configured truth.
    double estimand() const;
    Estimate estimate_at(const Assignment& z, const std::vector<double>& outcomes) const;
    VarianceEstimate variance_estimate_at(const Assignment& z,
                                          const std::vector<double>& outcomes) const;

    // Oracle wiring: psi and V-hat^B closures plus the bound term list.
    OracleInput oracle_input(double alpha) const;

    DiagnosticsReport diagnostics(double p, double q, double non_degeneracy_c) const;

private:
    Pipeline() = default;

    ScenarioConfig config_;
    std::unique_ptr<MomentProvider> provider_;
    std::vector<OrthoBasis> orthos_;
    std::vector<PositivityReport> positivity_;
    std::vector<RieszRepresentor> reps_;
    bool variance_ready_ = false;
    std::vector<std::pair<int, int>> skipped_;
    std::vector<PairAnalysis> pairs_;
    std::vector<PairClassification> classifications_;
    VarianceBoundSpec bound_;
    std::vector<SecondOrderRepresentor> so_reps_;
};

// Observed data for the estimate subcommand: one assignment plus one
// outcome per unit, from CSV ("z,<coords...>" row, then "unit,outcome"
// rows, 0-based units, '#' comments).
struct ObservedData {
    Assignment assignment;
    std::vector<double> outcomes;

    static ObservedData from_file(const std::string& path, int n);
};

}  // namespace rieszlab

#endif
