// Command-line front end: estimate, simulate, positivity, diagnose and
// oracle subcommands over a JSON scenario file.

#include <CLI11.hpp>
#include <fstream>
#include <optional>
#include <iostream>
#include <json.hpp>

#include "rieszlab/report.hpp"
#include "rieszlab/simulate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPositivity = 2;
constexpr int kExitConfig = 3;

struct GlobalFlags {
    std::string scenario_path;
    std::string out_path;
    std::string format;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::size_t reps = 0;
    bool reps_set = false;
    double alpha = 0.0;
    bool alpha_set = false;
    double tol = 0.0;
    bool tol_set = false;
};

// with_variance: forced value, or keep the scenario's own setting.
rieszlab::ScenarioConfig load_config(const GlobalFlags& flags,
                                     std::optional<bool> with_variance) {
    rieszlab::ScenarioConfig cfg = rieszlab::ScenarioConfig::from_file(flags.scenario_path);
    if (flags.seed_set) cfg.seed = flags.seed;
    if (flags.reps_set) cfg.replications = flags.reps;
    if (flags.alpha_set) cfg.alpha = flags.alpha;
    if (flags.tol_set) cfg.tolerances.orthogonalization = flags.tol;
    if (!flags.format.empty()) cfg.output_format = flags.format;
    if (with_variance.has_value()) cfg.with_variance = *with_variance;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Design-based causal estimation via Riesz representors"};
    app.require_subcommand(1);

    GlobalFlags flags;
    app.add_option("--seed", flags.seed, "Master seed override")->each([&](std::string) {
        flags.seed_set = true;
    });
    app.add_option("--reps", flags.reps, "Replication count override")->each([&](std::string) {
        flags.reps_set = true;
    });
    app.add_option("--alpha", flags.alpha, "Confidence level override")->each([&](std::string) {
        flags.alpha_set = true;
    });
    app.add_option("--tol", flags.tol, "Orthogonalization tolerance override")
        ->each([&](std::string) { flags.tol_set = true; });
    app.add_option("--format", flags.format, "Output format: json, csv or text");
    app.add_option("--out", flags.out_path, "Output path (default stdout)");

    // let global flags (--seed, --out, ...) appear after the subcommand
    auto* cmd_estimate = app.add_subcommand("estimate", "Point estimate from observed data");
    cmd_estimate->fallthrough();
    std::string data_path;
    bool with_variance_flag = false;
    cmd_estimate->add_option("scenario", flags.scenario_path, "Scenario JSON")->required();
    cmd_estimate->add_option("--data", data_path,
                             "Observed data CSV (default: the scenario's data_file)");
    cmd_estimate->add_flag("--with-variance", with_variance_flag,
                           "Also report V-hat^B and the Wald interval");

    auto* cmd_simulate = app.add_subcommand("simulate", "Monte Carlo replication study");
    cmd_simulate->fallthrough();
    cmd_simulate->add_option("scenario", flags.scenario_path, "Scenario JSON")->required();

    auto* cmd_positivity = app.add_subcommand("positivity", "Positivity reports per unit");
    cmd_positivity->fallthrough();
    cmd_positivity->add_option("scenario", flags.scenario_path, "Scenario JSON")->required();

    auto* cmd_diagnose = app.add_subcommand("diagnose", "Variance-matrix diagnostics");
    cmd_diagnose->fallthrough();
    double diag_p = 4.0, diag_q = 4.0, diag_c = 1e-8;
    cmd_diagnose->add_option("scenario", flags.scenario_path, "Scenario JSON")->required();
    cmd_diagnose->add_option("--norm-p", diag_p, "Outcome max-p norm order");
    cmd_diagnose->add_option("--norm-q", diag_q, "Representor max-q norm order");
    cmd_diagnose->add_option("--non-degeneracy-c", diag_c, "Threshold c for n Var >= c");

    auto* cmd_oracle = app.add_subcommand("oracle", "Exact brute-force enumeration");
    cmd_oracle->fallthrough();
    cmd_oracle->add_option("scenario", flags.scenario_path, "Scenario JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_estimate->parsed()) {
            auto cfg = load_config(flags, with_variance_flag);
            const std::string format = cfg.output_format;
            auto pipeline = rieszlab::Pipeline::build(std::move(cfg));
            std::string resolved = data_path.empty() ? pipeline->config().data_file : data_path;
            if (resolved.empty())
                throw rieszlab::ConfigInvalid("estimate needs --data or a data_file field");
            auto data = rieszlab::ObservedData::from_file(resolved, pipeline->config().n);
            rieszlab::Estimate est = pipeline->estimate_at(data.assignment, data.outcomes);
            nlohmann::ordered_json doc = rieszlab::to_json(est);
            if (with_variance_flag) {
                rieszlab::VarianceEstimate vb =
                    pipeline->variance_estimate_at(data.assignment, data.outcomes);
                doc["variance_estimate"] = rieszlab::to_json(vb);
                doc["confidence_interval"] = rieszlab::to_json(rieszlab::confidence_interval(
                    est.value, vb.value, pipeline->config().alpha));
                doc["sum_Q"] = pipeline->bound().sum_Q;
                doc["skipped_pairs"] = pipeline->skipped_pairs().size();
            }
            rieszlab::emit_json(doc, flags.out_path);
            return kExitOk;
        }
        if (cmd_simulate->parsed()) {
            auto cfg = load_config(flags, std::nullopt);
            const std::string format = cfg.output_format;
            auto pipeline = rieszlab::Pipeline::build(std::move(cfg));
            rieszlab::ReplicationReport report = rieszlab::run_scenario(
                *pipeline, pipeline->config().replications, pipeline->config().seed);
            rieszlab::emit_report(report, format, flags.out_path);
            return kExitOk;
        }
        if (cmd_positivity->parsed()) {
            auto cfg = load_config(flags, false);
            const std::string format = cfg.output_format;
            // Positivity must be reportable even when it fails, so build
            // with the override and consult the stored reports.
            cfg.positivity_override = true;
            auto pipeline = rieszlab::Pipeline::build(std::move(cfg));
            nlohmann::ordered_json doc = nlohmann::ordered_json::array();
            bool all_hold = true;
            for (int i = 0; i < pipeline->config().n; ++i) {
                const auto& report = pipeline->positivity_reports()[static_cast<std::size_t>(i)];
                all_hold = all_hold && report.holds;
                nlohmann::ordered_json row = rieszlab::to_json(report);
                row["unit"] = i;
                row["functional"] = pipeline->functionals()[static_cast<std::size_t>(i)].label();
                doc.push_back(row);
            }
            if (format == "text") {
                std::string body;
                for (const auto& row : doc)
                    body += "unit " + row["unit"].dump() + " [" +
                            row["functional"].get<std::string>() +
                            "]: " + (row["holds"].get<bool>() ? "holds" : "FAILS") +
                            ", witnesses " + row["witnesses"].dump() + "\n";
                if (flags.out_path.empty())
                    std::cout << body;
                else {
                    std::ofstream out(flags.out_path);
                    out << body;
                }
            } else {
                rieszlab::emit_json(doc, flags.out_path);
            }
            return all_hold ? kExitOk : kExitPositivity;
        }
        if (cmd_diagnose->parsed()) {
            auto cfg = load_config(flags, false);
            auto pipeline = rieszlab::Pipeline::build(std::move(cfg));
            rieszlab::DiagnosticsReport report = pipeline->diagnostics(diag_p, diag_q, diag_c);
            rieszlab::emit_json(rieszlab::to_json(report), flags.out_path);
            return kExitOk;
        }
        if (cmd_oracle->parsed()) {
            auto cfg = load_config(flags, std::nullopt);
            auto pipeline = rieszlab::Pipeline::build(std::move(cfg));
            rieszlab::OracleResult result =
                rieszlab::oracle_run(pipeline->oracle_input(pipeline->config().alpha));
            rieszlab::emit_json(rieszlab::to_json(result), flags.out_path);
            return kExitOk;
        }
    } catch (const rieszlab::PositivityViolated& e) {
        nlohmann::ordered_json doc = rieszlab::to_json(e.report);
        doc["error"] = e.what();
        std::cerr << doc.dump(2) << "\n";
        return kExitPositivity;
    } catch (const rieszlab::ConfigInvalid& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const rieszlab::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const rieszlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
