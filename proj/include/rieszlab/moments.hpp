#ifndef RIESZLAB_MOMENTS_HPP
#define RIESZLAB_MOMENTS_HPP

#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "rieszlab/basis.hpp"
#include "rieszlab/design.hpp"

namespace rieszlab {

struct Moment {
    double value = 0.0;
    double std_error = 0.0;  // zero for exact providers
    bool exact = true;
};

// Serves E[prod_t f_t(Z)] for basis-function factors. Results are cached
// under the canonical product descriptor (sorted ids with multiplicity),
// so permuted queries and repeated four-way products hit the cache. The
// cache is an internally synchronized insert-once map; providers are
// immutable otherwise and safe to share across workers.
class MomentProvider {
public:
    virtual ~MomentProvider() = default;

    virtual bool exact() const = 0;
    const Design& design() const { return design_; }

    Moment moment(const std::vector<const BasisFunction*>& factors);
    double value(const std::vector<const BasisFunction*>& factors) { return moment(factors).value; }

    // Number of distinct product descriptors served so far.
    std::size_t cached_count() const;

protected:
    explicit MomentProvider(Design design) : design_(std::move(design)) {}
    virtual Moment compute(const std::vector<const BasisFunction*>& factors,
                           const std::string& descriptor) = 0;

    Design design_;

private:
    mutable std::mutex mutex_;
    std::unordered_map<std::string, Moment> cache_;
};

// Exact expectations. Routes, in order: per-coordinate independence
// factorization (product designs; continuous coordinates integrate on
// 64-node Gauss rules, exact for polynomial factors), full support
// enumeration with compensated summation (enumerable designs). Throws
// NoExactRoute when neither applies.
class ExactMomentProvider : public MomentProvider {
public:
    explicit ExactMomentProvider(Design design, std::size_t enumeration_cap = kDefaultEnumerationCap)
        : MomentProvider(std::move(design)), cap_(enumeration_cap) {}

    bool exact() const override { return true; }

protected:
    Moment compute(const std::vector<const BasisFunction*>& factors,
                   const std::string& descriptor) override;

private:
    std::size_t cap_;
};

// Monte Carlo expectations: deterministic given the master seed (each
// descriptor draws from its own derived stream, so results do not depend
// on query order). Flagged approximate; orthogonalization and positivity
// decisions must not consume these.
class MonteCarloMomentProvider : public MomentProvider {
public:
    MonteCarloMomentProvider(Design design, std::size_t sample_count, std::uint64_t master_seed)
        : MomentProvider(std::move(design)), sample_count_(sample_count), master_seed_(master_seed) {}

    bool exact() const override { return false; }

protected:
    Moment compute(const std::vector<const BasisFunction*>& factors,
                   const std::string& descriptor) override;

private:
    std::size_t sample_count_;
    std::uint64_t master_seed_;
};

// Kahan-Neumaier compensated accumulator.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double total() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

std::string product_descriptor(const std::vector<const BasisFunction*>& factors);

// One-off exact expectation of a general function with declared support.
double expectation(const Design& design, const std::function<double(const Assignment&)>& g,
                   const std::vector<int>& support, std::size_t cap = kDefaultEnumerationCap);

}  // namespace rieszlab

#endif
