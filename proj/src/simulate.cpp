#include "rieszlab/simulate.hpp"

#include <chrono>

#include "rieszlab/parallel.hpp"
#include "rieszlab/rng.hpp"

namespace rieszlab {

int configured_thread_count() { return configured_worker_count(); }

ReplicationReport run_scenario(const Pipeline& pipeline, std::size_t replications,
                               std::uint64_t master_seed, int threads) {
    const auto t0 = std::chrono::steady_clock::now();
    const ScenarioConfig& cfg = pipeline.config();

    ReplicationReport report;
    report.n = cfg.n;
    report.replications = replications;
    report.master_seed = master_seed;
    report.alpha = cfg.alpha;
    report.with_variance = pipeline.variance_ready();
    report.seed_derivation = "replicate r uses design.sample(splitmix64(master ^ golden*(r+1)))";
    if (pipeline.variance_ready()) {
        report.sum_Q = pipeline.bound().sum_Q;
        report.skipped_pairs = pipeline.skipped_pairs().size();
    }
    if (replications == 0) return report;  // config echo only

    report.estimand = pipeline.estimand();

    std::vector<double> estimates(replications, 0.0);
    std::vector<double> variance_estimates(replications, 0.0);
    std::vector<unsigned char> covered(replications, 0);

    auto run_range = [&](std::size_t begin, std::size_t end) {
        std::vector<double> outcomes(static_cast<std::size_t>(cfg.n));
        for (std::size_t r = begin; r < end; ++r) {
            Assignment z = cfg.design.sample(derive_seed(master_seed, r));
            for (int i = 0; i < cfg.n; ++i)
                outcomes[static_cast<std::size_t>(i)] =
                    cfg.spaces[static_cast<std::size_t>(i)].evaluate(
                        cfg.truth[static_cast<std::size_t>(i)], z);
            Estimate est = pipeline.estimate_at(z, outcomes);
            estimates[r] = est.value;
            if (pipeline.variance_ready()) {
                VarianceEstimate vb = pipeline.variance_estimate_at(z, outcomes);
                variance_estimates[r] = vb.value;
                ConfidenceInterval ci = confidence_interval(est.value, vb.value, cfg.alpha);
                covered[r] = ci.lower() <= report.estimand && report.estimand <= ci.upper() ? 1 : 0;
            }
        }
    };

    int workers = threads >= 1 ? threads : configured_thread_count();
    if (workers <= 1 || replications < 64) {
        run_range(0, replications);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (replications + static_cast<std::size_t>(workers) - 1) /
                            static_cast<std::size_t>(workers);
        for (int w = 0; w < workers; ++w) {
            std::size_t begin = static_cast<std::size_t>(w) * chunk;
            std::size_t end = begin + chunk < replications ? begin + chunk : replications;
            if (begin >= end) break;
            pool.emplace_back(run_range, begin, end);
        }
        for (auto& t : pool) t.join();
    }

    // Ordered reduction by replicate index.
    CompensatedSum mean_acc;
    for (std::size_t r = 0; r < replications; ++r) mean_acc.add(estimates[r]);
    report.mean_estimate = mean_acc.total() / static_cast<double>(replications);
    report.bias = report.mean_estimate - report.estimand;

    CompensatedSum var_acc;
    for (std::size_t r = 0; r < replications; ++r) {
        double d = estimates[r] - report.mean_estimate;
        var_acc.add(d * d);
    }
    report.empirical_variance =
        replications > 1 ? var_acc.total() / static_cast<double>(replications - 1) : 0.0;

    if (pipeline.variance_ready()) {
        CompensatedSum vb_acc, cover_acc;
        for (std::size_t r = 0; r < replications; ++r) {
            vb_acc.add(variance_estimates[r]);
            cover_acc.add(covered[r]);
        }
        report.mean_variance_estimate = vb_acc.total() / static_cast<double>(replications);
        report.coverage = cover_acc.total() / static_cast<double>(replications);
        report.conservativeness_ratio =
            report.empirical_variance > 0.0
                ? report.mean_variance_estimate / report.empirical_variance
                : 0.0;
    }

    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace rieszlab
