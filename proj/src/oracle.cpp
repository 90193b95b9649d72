#include "rieszlab/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "rieszlab/moments.hpp"
#include "rieszlab/normal.hpp"
#include "rieszlab/parallel.hpp"

namespace rieszlab {

double oracle_moment(const Design& design, const std::vector<const BasisFunction*>& factors,
                     std::size_t cap) {
    CompensatedSum acc;
    for (const auto& [z, p] : design.enumerate_support(cap)) {
        double prod = p;
        for (const BasisFunction* f : factors) prod *= f->eval(z);
        acc.add(prod);
    }
    return acc.total();
}

namespace {

// Per-chunk partial sums over a fixed grid of support slices. The grid
// never depends on the worker count, so results are identical for any
// RIESZ_LAB_THREADS; the merge runs in chunk-index order.
constexpr std::size_t kOracleChunks = 64;

struct ChunkSums {
    CompensatedSum mean, square, vhat, cover, prob;
    std::vector<std::pair<double, double>> distribution;
};

}  // namespace

OracleResult oracle_run(const OracleInput& input) {
    const Design& design = *input.design;
    const auto& spaces = *input.spaces;
    const auto& functionals = *input.functionals;
    const auto& truth = *input.truth;
    const std::size_t n = spaces.size();

    auto support = design.enumerate_support(input.enumeration_cap);

    OracleResult out;
    out.alpha = input.alpha;
    out.has_variance_estimator = static_cast<bool>(input.variance_estimator);

    CompensatedSum tau_acc;
    for (std::size_t i = 0; i < n; ++i)
        tau_acc.add(functionals[i].apply(spaces[i], truth[i]));
    out.estimand = tau_acc.total() / static_cast<double>(n);

    const double quantile =
        out.has_variance_estimator ? normal_quantile(1.0 - input.alpha / 2.0) : 0.0;

    const std::size_t chunks = std::min(kOracleChunks, std::max<std::size_t>(1, support.size()));
    const std::size_t stride = (support.size() + chunks - 1) / chunks;
    std::vector<ChunkSums> partial(chunks);
    const int workers = configured_worker_count();

    parallel_for_index(chunks, workers, [&](std::size_t c) {
        ChunkSums& sums = partial[c];
        std::vector<double> outcomes(n);
        const std::size_t begin = c * stride;
        const std::size_t end = std::min(begin + stride, support.size());
        for (std::size_t s = begin; s < end; ++s) {
            const auto& [z, p] = support[s];
            sums.prob.add(p);
            for (std::size_t i = 0; i < n; ++i) outcomes[i] = spaces[i].evaluate(truth[i], z);
            CompensatedSum point;
            for (std::size_t i = 0; i < n; ++i) point.add(input.psi[i](z) * outcomes[i]);
            double estimate = point.total() / static_cast<double>(n);
            sums.mean.add(p * estimate);
            sums.square.add(p * estimate * estimate);
            sums.distribution.emplace_back(estimate, p);

            if (out.has_variance_estimator) {
                double vhat = input.variance_estimator(z, outcomes);
                sums.vhat.add(p * vhat);
                double radius = quantile * std::sqrt(std::max(vhat, 0.0));
                if (estimate - radius <= out.estimand && out.estimand <= estimate + radius)
                    sums.cover.add(p);
            }
        }
    });

    CompensatedSum mean_acc, sq_acc, vhat_acc, cover_acc, prob_acc;
    std::vector<std::pair<double, double>> dist;
    dist.reserve(support.size());
    for (const ChunkSums& sums : partial) {
        mean_acc.add(sums.mean.total());
        sq_acc.add(sums.square.total());
        vhat_acc.add(sums.vhat.total());
        cover_acc.add(sums.cover.total());
        prob_acc.add(sums.prob.total());
        dist.insert(dist.end(), sums.distribution.begin(), sums.distribution.end());
    }
    if (std::abs(prob_acc.total() - 1.0) > 1e-12)
        throw UnsupportedDesign("support probabilities do not sum to one");

    out.mean_estimate = mean_acc.total();
    out.variance = sq_acc.total() - out.mean_estimate * out.mean_estimate;
    out.mean_variance_estimate = vhat_acc.total();
    out.coverage = cover_acc.total();

    // VB from the term list; terms are independent, reduced in term order.
    std::vector<double> term_values(input.bound_terms.size(), 0.0);
    parallel_for_index(input.bound_terms.size(), workers, [&](std::size_t t) {
        const OracleBoundTerm& term = input.bound_terms[t];
        CompensatedSum efg, ef, eg;
        for (const auto& [z, p] : support) {
            double fv = term.f(z);
            double gv = term.g(z);
            efg.add(p * fv * gv);
            if (term.subtract_means) {
                ef.add(p * fv);
                eg.add(p * gv);
            }
        }
        double value = efg.total();
        if (term.subtract_means) value -= ef.total() * eg.total();
        term_values[t] = term.weight * value;
    });
    CompensatedSum bound_acc;
    for (double v : term_values) bound_acc.add(v);
    out.bound_value = bound_acc.total() / (static_cast<double>(n) * static_cast<double>(n));

    std::sort(dist.begin(), dist.end());
    for (const auto& [value, p] : dist) {
        if (!out.distribution.empty() && out.distribution.back().first == value)
            out.distribution.back().second += p;
        else
            out.distribution.emplace_back(value, p);
    }
    return out;
}

}  // namespace rieszlab
