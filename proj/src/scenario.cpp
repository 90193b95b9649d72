#include "rieszlab/scenario.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <set>
#include <sstream>

#include "rieszlab/parallel.hpp"
#include "rieszlab/rng.hpp"

namespace rieszlab {

namespace {

using nlohmann::json;

Design parse_design(const json& spec, int n) {
    if (!spec.contains("kind")) throw ConfigInvalid("design needs a 'kind'");
    const std::string kind = spec.at("kind").get<std::string>();
    int dimension = spec.value("dimension", n);
    if (kind == "bernoulli") {
        if (spec.contains("p") && spec.at("p").is_array())
            return Design::bernoulli(spec.at("p").get<std::vector<double>>());
        return Design::bernoulli(dimension, spec.value("p", 0.5));
    }
    if (kind == "complete_randomization") {
        if (!spec.contains("m_treated"))
            throw ConfigInvalid("complete_randomization needs 'm_treated'");
        return Design::complete_randomization(spec.at("m_treated").get<int>(), dimension);
    }
    if (kind == "enumerated") {
        std::vector<std::pair<Assignment, double>> support;
        for (const auto& row : spec.at("support")) {
            support.emplace_back(Assignment(row.at("z").get<std::vector<double>>()),
                                 row.at("prob").get<double>());
        }
        return Design::enumerated(std::move(support), spec.value("independent_coordinates", false));
    }
    if (kind == "independent_continuous") {
        auto parse_law = [](const json& j) {
            const std::string lk = j.at("kind").get<std::string>();
            if (lk == "semicircle") return CoordinateLaw::semicircle();
            if (lk == "uniform") return CoordinateLaw::uniform(j.at("a").get<double>(), j.at("b").get<double>());
            throw ConfigInvalid("unknown coordinate law '" + lk + "'");
        };
        std::vector<CoordinateLaw> laws;
        if (spec.contains("laws"))
            for (const auto& j : spec.at("laws")) laws.push_back(parse_law(j));
        else
            laws.assign(static_cast<std::size_t>(dimension), parse_law(spec.at("law")));
        return Design::independent_continuous(std::move(laws));
    }
    throw ConfigInvalid("unknown design kind '" + kind + "'");
}

std::vector<std::vector<int>> parse_graph(const json& spec, int n) {
    if (spec.contains("adjacency")) {
        auto adj = spec.at("adjacency").get<std::vector<std::vector<int>>>();
        if (static_cast<int>(adj.size()) != n)
            throw ConfigInvalid("adjacency list length differs from n");
        for (const auto& row : adj)
            for (int j : row)
                if (j < 0 || j >= n) throw ConfigInvalid("adjacency index out of range");
        return adj;
    }
    const std::string kind = spec.value("kind", "cycle");
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    if (kind == "cycle") {
        for (int i = 0; i < n; ++i) {
            adj[static_cast<std::size_t>(i)] = {(i + n - 1) % n, (i + 1) % n};
            if (n <= 2) {
                adj[static_cast<std::size_t>(i)].clear();
                if (n == 2) adj[static_cast<std::size_t>(i)].push_back(1 - i);
            }
        }
        return adj;
    }
    if (kind == "line") {
        for (int i = 0; i < n; ++i) {
            if (i > 0) adj[static_cast<std::size_t>(i)].push_back(i - 1);
            if (i + 1 < n) adj[static_cast<std::size_t>(i)].push_back(i + 1);
        }
        return adj;
    }
    throw ConfigInvalid("unknown graph kind '" + kind + "'");
}

ModelSpace parse_space(const json& spec, int unit, int n) {
    const std::string tmpl = spec.at("template").get<std::string>();
    if (tmpl == "sutva") return sutva_space(unit);
    if (tmpl == "linear_in_means")
        return linear_in_means_space(unit, parse_graph(spec.at("graph"), n)[static_cast<std::size_t>(unit)]);
    if (tmpl == "exposure")
        return exposure_space(unit, parse_graph(spec.at("graph"), n)[static_cast<std::size_t>(unit)]);
    if (tmpl == "polynomial") return polynomial_space(unit, spec.at("degree").get<int>());
    if (tmpl == "chebyshev") return chebyshev_space(unit, spec.at("degree").get<int>());
    throw ConfigInvalid("unknown model space template '" + tmpl + "'");
}

EffectFunctional parse_functional(const json& spec, int unit, int n, const Design& design,
                                  std::size_t cap) {
    const std::string tmpl = spec.at("template").get<std::string>();
    Assignment ones(std::vector<double>(static_cast<std::size_t>(design.dimension()), 1.0));
    Assignment zeros = Assignment::zeros(design.dimension());
    if (tmpl == "all_vs_none") return EffectFunctional::contrast(ones, zeros).set_label("all_vs_none");
    if (tmpl == "direct_effect") {
        Assignment own = zeros;
        own[unit] = 1.0;
        return EffectFunctional::contrast(own, zeros).set_label("direct_effect");
    }
    if (tmpl == "indirect_effect") {
        Assignment others = ones;
        others[unit] = 0.0;
        return EffectFunctional::contrast(others, zeros).set_label("indirect_effect");
    }
    if (tmpl == "indirect_effect_mean") {
        // Per-neighbor average of the indirect contrast:
        // |N_i|^{-1} (f(1 - e_i) - f(0)).
        auto neighbors = parse_graph(spec.at("graph"), n)[static_cast<std::size_t>(unit)];
        if (neighbors.empty()) throw ConfigInvalid("indirect_effect_mean needs neighbors");
        double w = 1.0 / static_cast<double>(neighbors.size());
        Assignment others = ones;
        others[unit] = 0.0;
        return EffectFunctional::integration({{others, w}, {zeros, -w}})
            .set_label("indirect_effect_mean");
    }
    if (tmpl == "contrast") {
        return EffectFunctional::contrast(Assignment(spec.at("z_a").get<std::vector<double>>()),
                                          Assignment(spec.at("z_b").get<std::vector<double>>()));
    }
    if (tmpl == "coefficient")
        return EffectFunctional::coefficient(spec.at("weights").get<std::vector<double>>());
    if (tmpl == "exposure_contrast") {
        // Exposure spaces have indicator bases, so the exposure contrast
        // picks coefficients: +1 at exposure a, -1 at exposure b.
        std::vector<double> weights(4, 0.0);
        weights[static_cast<std::size_t>(spec.at("a").get<int>())] = 1.0;
        weights[static_cast<std::size_t>(spec.at("b").get<int>())] = -1.0;
        return EffectFunctional::coefficient(std::move(weights)).set_label("exposure_contrast");
    }
    if (tmpl == "hudgens_halloran_direct") {
        // Integration against mu_i(z) = (2 z_i - 1) P(Z = z | Z_i = z_i),
        // precompiled to a finite weighted list via support enumeration.
        auto support = design.enumerate_support(cap);
        double p1 = 0.0;
        for (const auto& [z, p] : support)
            if (z[unit] == 1.0) p1 += p;
        double p0 = 1.0 - p1;
        if (p1 <= 0.0 || p0 <= 0.0)
            throw ConfigInvalid("hudgens_halloran_direct needs 0 < P(Z_i=1) < 1");
        std::vector<std::pair<Assignment, double>> measure;
        measure.reserve(support.size());
        for (const auto& [z, p] : support) {
            double sign = z[unit] == 1.0 ? 1.0 : -1.0;
            double cond = z[unit] == 1.0 ? p / p1 : p / p0;
            measure.emplace_back(z, sign * cond);
        }
        return EffectFunctional::integration(std::move(measure)).set_label("hudgens_halloran_direct");
    }
    if (tmpl == "derivative_at_zero") {
        std::vector<double> direction(static_cast<std::size_t>(design.dimension()), 0.0);
        direction[static_cast<std::size_t>(unit)] = 1.0;
        return EffectFunctional::derivative(zeros, std::move(direction),
                                            spec.value("allow_finite_difference", true),
                                            spec.value("step", 1e-5))
            .set_label("derivative_at_zero");
    }
    if (tmpl == "design_derivative") {
        int dim = design.dimension();
        double at = spec.value("at", 0.5);
        double step = spec.value("step", 1e-4);
        return EffectFunctional::design_derivative(
                   [dim](double pi) { return Design::bernoulli(dim, pi); }, at, step)
            .set_label("design_derivative");
    }
    (void)n;
    throw ConfigInvalid("unknown functional template '" + tmpl + "'");
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigInvalid(std::string("scenario is not valid JSON: ") + e.what());
    }
    try {
        ScenarioConfig cfg;
        cfg.n = doc.at("n").get<int>();
        if (cfg.n < 1) throw ConfigInvalid("n must be >= 1");
        cfg.enumeration_cap = doc.value("enumeration_cap", kDefaultEnumerationCap);
        cfg.design = parse_design(doc.at("design"), cfg.n);
        if (doc.at("design").contains("moment_mode")) {
            const json& mm = doc.at("design").at("moment_mode");
            if (mm.is_string() && mm.get<std::string>() == "exact") {
                cfg.moment_mode.exact = true;
            } else if (mm.is_object() && mm.value("kind", "") == "monte_carlo") {
                cfg.moment_mode.exact = false;
                cfg.moment_mode.sample_count = mm.at("sample_count").get<std::size_t>();
            } else {
                throw ConfigInvalid("moment_mode is 'exact' or {kind: monte_carlo, sample_count}");
            }
        }

        const json& spaces_spec = doc.at("model_spaces");
        if (spaces_spec.is_array()) {
            if (static_cast<int>(spaces_spec.size()) != cfg.n)
                throw ConfigInvalid("model_spaces list length differs from n");
            for (int i = 0; i < cfg.n; ++i)
                cfg.spaces.push_back(parse_space(spaces_spec[static_cast<std::size_t>(i)], i, cfg.n));
        } else {
            for (int i = 0; i < cfg.n; ++i) cfg.spaces.push_back(parse_space(spaces_spec, i, cfg.n));
        }

        const json& fn_spec = doc.at("functionals");
        if (fn_spec.is_array()) {
            if (static_cast<int>(fn_spec.size()) != cfg.n)
                throw ConfigInvalid("functionals list length differs from n");
            for (int i = 0; i < cfg.n; ++i)
                cfg.functionals.push_back(
                    parse_functional(fn_spec[static_cast<std::size_t>(i)], i, cfg.n, cfg.design,
                                     cfg.enumeration_cap));
        } else {
            for (int i = 0; i < cfg.n; ++i)
                cfg.functionals.push_back(
                    parse_functional(fn_spec, i, cfg.n, cfg.design, cfg.enumeration_cap));
        }

        if (doc.contains("truth")) {
            const json& truth = doc.at("truth");
            if (truth.contains("coefficients")) {
                cfg.truth = truth.at("coefficients").get<std::vector<std::vector<double>>>();
                if (static_cast<int>(cfg.truth.size()) != cfg.n)
                    throw ConfigInvalid("truth coefficient rows differ from n");
                for (int i = 0; i < cfg.n; ++i)
                    if (cfg.truth[static_cast<std::size_t>(i)].size() !=
                        static_cast<std::size_t>(cfg.spaces[static_cast<std::size_t>(i)].dimension()))
                        throw ConfigInvalid("truth coefficients do not match basis dimension");
            } else if (truth.contains("random_uniform")) {
                const json& ru = truth.at("random_uniform");
                double low = ru.value("low", 0.0), high = ru.value("high", 1.0);
                SplitMix64 gen(ru.value("seed", std::uint64_t{7}));
                for (int i = 0; i < cfg.n; ++i) {
                    std::vector<double> row(
                        static_cast<std::size_t>(cfg.spaces[static_cast<std::size_t>(i)].dimension()));
                    for (double& v : row) v = low + (high - low) * gen.next_double();
                    cfg.truth.push_back(std::move(row));
                }
            } else {
                throw ConfigInvalid("truth needs 'coefficients' or 'random_uniform'");
            }
        }

        cfg.seed = doc.value("seed", std::uint64_t{1});
        cfg.replications = doc.value("replications", std::size_t{1000});
        cfg.alpha = doc.value("alpha", 0.05);
        if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ConfigInvalid("alpha outside (0, 1)");
        if (doc.contains("tolerances")) {
            const json& tol = doc.at("tolerances");
            cfg.tolerances.orthogonalization = tol.value("orthogonalization", kDefaultOrthoTol);
            cfg.tolerances.positivity = tol.value("positivity", kDefaultPositivityTol);
            cfg.tolerances.eigen = tol.value("eigen", kDefaultEigenTol);
        }
        cfg.positivity_override = doc.value("positivity_override", false);
        cfg.data_file = doc.value("data_file", std::string());
        cfg.with_variance = doc.value("with_variance", true);
        cfg.output_format = doc.value("output_format", "json");
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigInvalid(std::string("scenario schema violation: ") + e.what());
    }
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str());
}

std::unique_ptr<Pipeline> Pipeline::build(ScenarioConfig config) {
    auto pipeline = std::unique_ptr<Pipeline>(new Pipeline());
    pipeline->config_ = std::move(config);
    ScenarioConfig& cfg = pipeline->config_;
    // Orthogonalization and positivity decisions demand exact moments;
    // a monte_carlo moment_mode surfaces as InexactMoments below.
    if (cfg.moment_mode.exact)
        pipeline->provider_ =
            std::make_unique<ExactMomentProvider>(cfg.design, cfg.enumeration_cap);
    else
        pipeline->provider_ = std::make_unique<MonteCarloMomentProvider>(
            cfg.design, cfg.moment_mode.sample_count, cfg.seed);

    for (const ModelSpace& space : cfg.spaces) {
        std::set<std::string> ids;
        for (const auto& f : space.basis)
            if (!ids.insert(f.id).second)
                throw ConfigInvalid("duplicate basis identity '" + f.id + "'");
        if (!verify_support_declaration(space, cfg.design, 8, cfg.seed ^ 0xA5A5A5A5ULL))
            throw ConfigInvalid("a basis function depends on coordinates outside its support");
    }

    pipeline->orthos_.reserve(cfg.spaces.size());
    for (const ModelSpace& space : cfg.spaces)
        pipeline->orthos_.push_back(
            gram_schmidt(space, *pipeline->provider_, cfg.tolerances.orthogonalization));

    pipeline->reps_.reserve(cfg.spaces.size());
    for (std::size_t i = 0; i < cfg.spaces.size(); ++i) {
        pipeline->positivity_.push_back(test_positivity(
            pipeline->orthos_[i], cfg.functionals[i], cfg.tolerances.positivity));
        pipeline->reps_.push_back(build_representor(pipeline->orthos_[i], cfg.functionals[i],
                                                    cfg.positivity_override,
                                                    cfg.tolerances.positivity));
    }

    if (cfg.with_variance) {
        pipeline->skipped_ = second_order_neighbor_skip(cfg.spaces, cfg.design);
        std::set<std::pair<int, int>> skipped_set(pipeline->skipped_.begin(),
                                                  pipeline->skipped_.end());
        // Diagonal pairs first so d_{i,k} is available during assembly;
        // then the active off-diagonal pairs, stored once with i < j.
        std::vector<std::pair<int, int>> stored;
        stored.reserve(static_cast<std::size_t>(cfg.n));
        for (int i = 0; i < cfg.n; ++i) stored.emplace_back(i, i);
        for (int i = 0; i < cfg.n; ++i)
            for (int j = i + 1; j < cfg.n; ++j)
                if (!skipped_set.count({i, j})) stored.emplace_back(i, j);

        // Pair work is independent per (i, j): analyses and
        // classifications fill index-addressed slots from a worker pool;
        // the later assembly is a single-threaded ordered reduction.
        pipeline->pairs_.resize(stored.size());
        pipeline->classifications_.resize(stored.size());
        const int workers = configured_worker_count();
        parallel_for_index(stored.size(), workers, [&](std::size_t idx) {
            auto [i, j] = stored[idx];
            pipeline->pairs_[idx] = analyze_pair(
                pipeline->orthos_[static_cast<std::size_t>(i)],
                pipeline->orthos_[static_cast<std::size_t>(j)],
                pipeline->reps_[static_cast<std::size_t>(i)],
                pipeline->reps_[static_cast<std::size_t>(j)], *pipeline->provider_,
                cfg.tolerances.orthogonalization);
            pipeline->classifications_[idx] =
                classify_elementary(pipeline->pairs_[idx], cfg.tolerances.positivity);
        });
        std::vector<const PairAnalysis*> pair_index;
        for (const PairAnalysis& pair : pipeline->pairs_) pair_index.push_back(&pair);

        std::vector<int> dims;
        dims.reserve(cfg.spaces.size());
        for (const auto& space : cfg.spaces) dims.push_back(space.dimension());
        pipeline->bound_ = assemble_bound(pipeline->classifications_, pipeline->skipped_, cfg.n,
                                          dims, pair_index);

        pipeline->so_reps_.reserve(pipeline->bound_.pair_bounds.size());
        for (std::size_t idx = 0; idx < pipeline->bound_.pair_bounds.size(); ++idx)
            pipeline->so_reps_.push_back(build_second_order_representor(
                pipeline->bound_.pair_bounds[idx], pipeline->pairs_[idx],
                cfg.tolerances.positivity));
        pipeline->variance_ready_ = true;
    }
    return pipeline;
}

void Pipeline::set_truth(std::vector<std::vector<double>> truth) {
    if (static_cast<int>(truth.size()) != config_.n)
        throw ConfigInvalid("truth coefficient rows differ from n");
    for (int i = 0; i < config_.n; ++i)
        if (truth[static_cast<std::size_t>(i)].size() !=
            static_cast<std::size_t>(config_.spaces[static_cast<std::size_t>(i)].dimension()))
            throw ConfigInvalid("truth coefficients do not match basis dimension");
    config_.truth = std::move(truth);
}

double Pipeline::estimand() const {
    if (config_.truth.empty()) throw ConfigInvalid("scenario declares no truth coefficients");
    CompensatedSum acc;
    for (std::size_t i = 0; i < config_.spaces.size(); ++i)
        acc.add(config_.functionals[i].apply(config_.spaces[i], config_.truth[i]));
    return acc.total() / static_cast<double>(config_.n);
}

Estimate Pipeline::estimate_at(const Assignment& z, const std::vector<double>& outcomes) const {
    return point_estimate(reps_, config_.spaces, z, outcomes);
}

VarianceEstimate Pipeline::variance_estimate_at(const Assignment& z,
                                                const std::vector<double>& outcomes) const {
    if (!variance_ready_) throw ConfigInvalid("pipeline built without variance machinery");
    return variance_estimate(so_reps_, config_.spaces, z, outcomes, skipped_);
}

OracleInput Pipeline::oracle_input(double alpha) const {
    if (config_.truth.empty()) throw ConfigInvalid("oracle needs truth coefficients");
    OracleInput input;
    input.design = &config_.design;
    input.spaces = &config_.spaces;
    input.functionals = &config_.functionals;
    input.truth = &config_.truth;
    input.alpha = alpha;
    input.enumeration_cap = config_.enumeration_cap;
    for (std::size_t i = 0; i < reps_.size(); ++i) {
        const RieszRepresentor* rep = &reps_[i];
        const ModelSpace* space = &config_.spaces[i];
        input.psi.emplace_back(
            [rep, space](const Assignment& z) { return rep->evaluate(*space, z); });
    }
    if (variance_ready_) {
        input.variance_estimator = [this](const Assignment& z, const std::vector<double>& y) {
            return variance_estimate_at(z, y).value;
        };
        for (std::size_t idx = 0; idx < bound_.pair_bounds.size(); ++idx) {
            const PairBound& pb = bound_.pair_bounds[idx];
            const PairAnalysis& pair = pairs_[idx];
            const double multiplicity = pb.i == pb.j ? 1.0 : 2.0;
            for (const BoundTerm& term : pb.terms) {
                const OrthoBasis* oi = pair.ortho_i;
                const OrthoBasis* oj = pair.ortho_j;
                const ModelSpace* si = &config_.spaces[static_cast<std::size_t>(pb.i)];
                const ModelSpace* sj = &config_.spaces[static_cast<std::size_t>(pb.j)];
                // truth rows by value: the input is a snapshot of the
                // current truth
                std::vector<double> yi = config_.truth[static_cast<std::size_t>(pb.i)];
                std::vector<double> yj = config_.truth[static_cast<std::size_t>(pb.j)];
                OracleBoundTerm ot;
                if (term.type == BoundTerm::Type::Elementary) {
                    int k = term.k, l = term.l;
                    ot.weight =
                        multiplicity * term.weight * pair.b_i(k) * pair.b_j(l);
                    if (ot.weight == 0.0) continue;
                    ot.f = [oi, si, yi, k](const Assignment& z) {
                        return oi->evaluate_rho(k, z) * si->evaluate(yi, z);
                    };
                    ot.g = [oj, sj, yj, l](const Assignment& z) {
                        return oj->evaluate_rho(l, z) * sj->evaluate(yj, z);
                    };
                    ot.subtract_means = true;
                } else {
                    int k = term.k;
                    ot.weight = multiplicity * term.weight;
                    if (ot.weight == 0.0) continue;
                    ot.f = [oi, si, yi, k](const Assignment& z) {
                        return oi->evaluate_rho(k, z) * si->evaluate(yi, z);
                    };
                    ot.g = ot.f;
                    ot.subtract_means = false;
                }
                input.bound_terms.push_back(std::move(ot));
            }
        }
    }
    return input;
}

DiagnosticsReport Pipeline::diagnostics(double p, double q, double non_degeneracy_c) const {
    DiagnosticsReport report;
    report.norm_p = p;
    report.norm_q = q;

    NeighborhoodSummary nbhd;
    if (config_.design.independent_coordinates())
        nbhd = dependency_neighborhoods(config_.spaces, config_.design);
    else
        nbhd = conservative_neighborhoods(config_.n);
    report.davg = nbhd.davg;
    report.dmax = nbhd.dmax;
    report.savg = nbhd.savg;
    report.dmax_rate_ratio = nbhd.dmax / std::pow(static_cast<double>(config_.n), 0.25);

    VarianceMatrix H = variance_matrix(orthos_, reps_, *provider_);
    report.opnorm = operator_norm(H);

    std::vector<std::vector<double>> rep_coeffs;
    rep_coeffs.reserve(reps_.size());
    for (const auto& rep : reps_)
        rep_coeffs.emplace_back(rep.beta.data(), rep.beta.data() + rep.beta.size());
    report.maxq_representor = max_p_norm(config_.spaces, rep_coeffs, config_.design, q);

    if (!config_.truth.empty()) {
        report.maxp_outcome = max_p_norm(config_.spaces, config_.truth, config_.design, p);
        report.consistency_rmse_bound =
            consistency_bound(report.davg, report.maxp_outcome, report.maxq_representor,
                              config_.n, p, q);
        // Worst-case RMSE with C equal to the truth's mean-square norm.
        CompensatedSum ms;
        for (std::size_t i = 0; i < config_.spaces.size(); ++i) {
            const ModelSpace& space = config_.spaces[i];
            const std::vector<double>& c = config_.truth[i];
            ms.add(expectation(
                config_.design,
                [&space, &c](const Assignment& z) {
                    double y = space.evaluate(c, z);
                    return y * y;
                },
                space.support_union(), config_.enumeration_cap));
        }
        double C = std::sqrt(ms.total() / static_cast<double>(config_.n));
        report.worst_case_rmse_bound = worst_case_rmse(report.opnorm, C, config_.n);

        Eigen::VectorXd a(H.H.rows());
        for (Eigen::Index r = 0; r < H.H.rows(); ++r) {
            auto [unit, l] = H.index[static_cast<std::size_t>(r)];
            Eigen::VectorXd coeffs = Eigen::Map<const Eigen::VectorXd>(
                config_.truth[static_cast<std::size_t>(unit)].data(),
                static_cast<Eigen::Index>(config_.truth[static_cast<std::size_t>(unit)].size()));
            a(r) = onb_coefficients(orthos_[static_cast<std::size_t>(unit)], coeffs)(l);
        }
        report.exact_variance = exact_variance_quadratic(H, a);
        report.non_degeneracy_c = non_degeneracy_c;
        report.non_degenerate = config_.n * report.exact_variance >= non_degeneracy_c;
    }
    return report;
}

ObservedData ObservedData::from_file(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open data file '" + path + "'");
    ObservedData data;
    data.outcomes.assign(static_cast<std::size_t>(n),
                         std::numeric_limits<double>::quiet_NaN());
    std::string line;
    bool have_assignment = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream row(line);
        std::string field;
        std::getline(row, field, ',');
        if (field == "z") {
            std::vector<double> coords;
            while (std::getline(row, field, ',')) coords.push_back(std::stod(field));
            data.assignment = Assignment(std::move(coords));
            have_assignment = true;
        } else {
            int unit = std::stoi(field);
            if (unit < 0 || unit >= n) throw ConfigInvalid("data file unit index out of range");
            if (!std::getline(row, field, ',')) throw ConfigInvalid("data row missing outcome");
            data.outcomes[static_cast<std::size_t>(unit)] = std::stod(field);
        }
    }
    if (!have_assignment) throw ConfigInvalid("data file has no assignment ('z') row");
    for (double y : data.outcomes)
        if (std::isnan(y)) throw ConfigInvalid("data file missing an outcome row for some unit");
    return data;
}

}  // namespace rieszlab
