#ifndef RIESZLAB_SIMULATE_HPP
#define RIESZLAB_SIMULATE_HPP

#include <cstdint>
#include <string>

#include "rieszlab/scenario.hpp"

namespace rieszlab {

// Aggregates of R seeded replications of one scenario. Runtime is carried
// for the text report only; the JSON and CSV emissions omit it so that
// fixed-seed runs stay byte-identical.
struct ReplicationReport {
    int n = 0;
    std::size_t replications = 0;
    std::uint64_t master_seed = 0;
    double alpha = 0.05;
    double estimand = 0.0;
    double mean_estimate = 0.0;
    double bias = 0.0;
    double empirical_variance = 0.0;
    bool with_variance = false;
    double mean_variance_estimate = 0.0;
    double conservativeness_ratio = 0.0;  // mean V-hat^B / empirical variance
    double coverage = 0.0;
    long long sum_Q = 0;
    std::size_t skipped_pairs = 0;
    double runtime_seconds = 0.0;
    std::string seed_derivation;
};

// Builds nothing: replays R assignments through an already-built
// pipeline. Replicate r draws from design.sample(derive_seed(master, r));
// aggregation is a deterministic ordered reduction by replicate index, so
// the worker count never changes the result.
ReplicationReport run_scenario(const Pipeline& pipeline, std::size_t replications,
                               std::uint64_t master_seed, int threads = 0);

// Worker count: RIESZ_LAB_THREADS when set, else min(hardware, 8).
int configured_thread_count();

}  // namespace rieszlab

#endif
