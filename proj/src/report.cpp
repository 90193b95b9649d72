#include "rieszlab/report.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace rieszlab {

using nlohmann::ordered_json;

ordered_json to_json(const ReplicationReport& r) {
    ordered_json doc;
    doc["n"] = r.n;
    doc["replications"] = r.replications;
    doc["master_seed"] = r.master_seed;
    doc["alpha"] = r.alpha;
    doc["estimand"] = r.estimand;
    doc["mean_estimate"] = r.mean_estimate;
    doc["bias"] = r.bias;
    doc["empirical_variance"] = r.empirical_variance;
    doc["with_variance"] = r.with_variance;
    doc["mean_variance_estimate"] = r.mean_variance_estimate;
    doc["conservativeness_ratio"] = r.conservativeness_ratio;
    doc["coverage"] = r.coverage;
    doc["sum_Q"] = r.sum_Q;
    doc["skipped_pairs"] = r.skipped_pairs;
    doc["seed_derivation"] = r.seed_derivation;
    // runtime_seconds is deliberately absent: fixed-seed runs must be
    // byte-identical.
    return doc;
}

ordered_json to_json(const OracleResult& r) {
    ordered_json doc;
    doc["estimand"] = r.estimand;
    doc["mean_estimate"] = r.mean_estimate;
    doc["variance"] = r.variance;
    doc["bound_value"] = r.bound_value;
    doc["mean_variance_estimate"] = r.mean_variance_estimate;
    doc["coverage"] = r.coverage;
    doc["alpha"] = r.alpha;
    doc["has_variance_estimator"] = r.has_variance_estimator;
    ordered_json dist = ordered_json::array();
    for (const auto& [value, prob] : r.distribution)
        dist.push_back(ordered_json{{"value", value}, {"probability", prob}});
    doc["distribution"] = dist;
    return doc;
}

ordered_json to_json(const Estimate& e) {
    ordered_json doc;
    doc["value"] = e.value;
    doc["unit_terms"] = e.unit_terms;
    doc["assignment"] = e.assignment.coords;
    doc["outcomes"] = e.outcomes;
    return doc;
}

ordered_json to_json(const VarianceEstimate& e) {
    ordered_json doc;
    doc["value"] = e.value;
    ordered_json pairs = ordered_json::array();
    for (std::size_t t = 0; t < e.pair_terms.size(); ++t)
        pairs.push_back(ordered_json{{"i", e.stored_pairs[t].first},
                                     {"j", e.stored_pairs[t].second},
                                     {"term", e.pair_terms[t]}});
    doc["pair_terms"] = pairs;
    doc["skipped_pairs"] = e.skipped_count;
    return doc;
}

ordered_json to_json(const ConfidenceInterval& ci) {
    ordered_json doc;
    doc["center"] = ci.center;
    doc["radius"] = ci.radius;
    doc["lower"] = ci.lower();
    doc["upper"] = ci.upper();
    doc["alpha"] = ci.alpha;
    doc["clamped"] = ci.clamped;
    return doc;
}

ordered_json to_json(const PositivityReport& r) {
    ordered_json doc;
    doc["holds"] = r.holds;
    doc["tolerance"] = r.tolerance;
    ordered_json witnesses = ordered_json::array();
    for (const auto& [index, value] : r.witnesses)
        witnesses.push_back(ordered_json{{"null_direction", index}, {"value", value}});
    doc["witnesses"] = witnesses;
    return doc;
}

ordered_json to_json(const DiagnosticsReport& r) {
    ordered_json doc;
    doc["operator_norm"] = r.opnorm;
    doc["davg"] = r.davg;
    doc["dmax"] = r.dmax;
    doc["savg"] = r.savg;
    doc["max_p_norm_outcome"] = r.maxp_outcome;
    doc["max_q_norm_representor"] = r.maxq_representor;
    doc["norm_p"] = r.norm_p;
    doc["norm_q"] = r.norm_q;
    doc["consistency_rmse_bound"] = r.consistency_rmse_bound;
    doc["worst_case_rmse_bound"] = r.worst_case_rmse_bound;
    doc["exact_variance"] = r.exact_variance;
    doc["non_degenerate"] = r.non_degenerate;
    doc["non_degeneracy_c"] = r.non_degeneracy_c;
    doc["dmax_rate_ratio"] = r.dmax_rate_ratio;
    doc["alpha_convention"] =
        "alpha_{i,l} = (orthonormal coefficient of y_i on rho_{i,l}) / sqrt(n); "
        "rows unit-major over B_o";
    return doc;
}

std::string to_csv(const ReplicationReport& r) {
    std::ostringstream out;
    out.precision(17);
    out << "n,replications,master_seed,alpha,estimand,mean_estimate,bias,empirical_variance,"
           "mean_variance_estimate,conservativeness_ratio,coverage,sum_Q,skipped_pairs\n";
    out << r.n << ',' << r.replications << ',' << r.master_seed << ',' << r.alpha << ','
        << r.estimand << ',' << r.mean_estimate << ',' << r.bias << ',' << r.empirical_variance
        << ',' << r.mean_variance_estimate << ',' << r.conservativeness_ratio << ',' << r.coverage
        << ',' << r.sum_Q << ',' << r.skipped_pairs << '\n';
    return out.str();
}

std::string to_text(const ReplicationReport& r) {
    std::ostringstream out;
    out.precision(12);
    out << "replication report\n"
        << "  n: " << r.n << "\n"
        << "  replications: " << r.replications << "\n"
        << "  master_seed: " << r.master_seed << "\n"
        << "  alpha: " << r.alpha << "\n"
        << "  estimand: " << r.estimand << "\n"
        << "  mean_estimate: " << r.mean_estimate << "\n"
        << "  bias: " << r.bias << "\n"
        << "  empirical_variance: " << r.empirical_variance << "\n"
        << "  mean_variance_estimate: " << r.mean_variance_estimate << "\n"
        << "  conservativeness_ratio: " << r.conservativeness_ratio << "\n"
        << "  coverage: " << r.coverage << "\n"
        << "  sum_Q (conservativeness indicator): " << r.sum_Q << "\n"
        << "  skipped_pairs: " << r.skipped_pairs << "\n"
        << "  seed_derivation: " << r.seed_derivation << "\n"
        << "  runtime_seconds: " << r.runtime_seconds << "\n";
    return out.str();
}

namespace {

void write_or_print(const std::string& body, const std::string& path) {
    if (path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output path '" + path + "'");
    out << body;
    if (!out) throw IoError("failed writing to '" + path + "'");
}

}  // namespace

void emit_report(const ReplicationReport& report, const std::string& format,
                 const std::string& path) {
    if (format == "json")
        write_or_print(to_json(report).dump(2) + "\n", path);
    else if (format == "csv")
        write_or_print(to_csv(report), path);
    else if (format == "text")
        write_or_print(to_text(report), path);
    else
        throw ConfigInvalid("unknown report format '" + format + "'");
}

void emit_json(const nlohmann::ordered_json& doc, const std::string& path) {
    write_or_print(doc.dump(2) + "\n", path);
}

}  // namespace rieszlab
