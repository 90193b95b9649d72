#include "rieszlab/design.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "rieszlab/rng.hpp"

namespace rieszlab {

Design Design::enumerated(std::vector<std::pair<Assignment, double>> support,
                          bool independent_coordinates) {
    if (support.empty()) throw UnsupportedDesign("enumerated design needs a non-empty support");
    Design d;
    d.kind_ = DesignKind::Enumerated;
    d.dimension_ = support.front().first.dimension();
    double total = 0.0;
    for (const auto& [z, p] : support) {
        if (z.dimension() != d.dimension_)
            throw LengthMismatch("support points disagree on dimension");
        if (p < 0.0) throw UnsupportedDesign("negative probability in enumerated support");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw UnsupportedDesign("enumerated probabilities sum to " + std::to_string(total));
    d.support_ = std::move(support);
    d.enumerated_independent_ = independent_coordinates;
    return d;
}

Design Design::bernoulli(std::vector<double> probabilities) {
    if (probabilities.empty()) throw UnsupportedDesign("bernoulli design needs dimension >= 1");
    for (double p : probabilities)
        if (p < 0.0 || p > 1.0) throw UnsupportedDesign("bernoulli probability outside [0,1]");
    Design d;
    d.kind_ = DesignKind::Bernoulli;
    d.dimension_ = static_cast<int>(probabilities.size());
    d.probs_ = std::move(probabilities);
    return d;
}

Design Design::bernoulli(int dimension, double p) {
    return bernoulli(std::vector<double>(static_cast<std::size_t>(dimension), p));
}

Design Design::complete_randomization(int m_treated, int dimension) {
    if (dimension < 1) throw UnsupportedDesign("complete randomization needs dimension >= 1");
    if (m_treated < 0 || m_treated > dimension)
        throw UnsupportedDesign("m_treated outside [0, dimension]");
    Design d;
    d.kind_ = DesignKind::CompleteRandomization;
    d.dimension_ = dimension;
    d.m_treated_ = m_treated;
    return d;
}

Design Design::independent_continuous(std::vector<CoordinateLaw> laws) {
    if (laws.empty()) throw UnsupportedDesign("continuous design needs dimension >= 1");
    for (const auto& law : laws)
        if (law.kind == CoordinateLaw::Kind::Uniform && !(law.lower < law.upper))
            throw UnsupportedDesign("uniform law needs lower < upper");
    Design d;
    d.kind_ = DesignKind::IndependentContinuous;
    d.dimension_ = static_cast<int>(laws.size());
    d.laws_ = std::move(laws);
    return d;
}

bool Design::independent_coordinates() const {
    switch (kind_) {
        case DesignKind::Bernoulli:
        case DesignKind::IndependentContinuous:
            return true;
        case DesignKind::Enumerated:
            return enumerated_independent_;
        case DesignKind::CompleteRandomization:
            return false;
    }
    return false;
}

bool Design::enumerable() const { return kind_ != DesignKind::IndependentContinuous; }

bool Design::binary() const {
    switch (kind_) {
        case DesignKind::Bernoulli:
        case DesignKind::CompleteRandomization:
            return true;
        case DesignKind::Enumerated: {
            for (const auto& [z, p] : support_)
                for (double v : z.coords)
                    if (v != 0.0 && v != 1.0) return false;
            return true;
        }
        case DesignKind::IndependentContinuous:
            return false;
    }
    return false;
}

namespace {

double sample_law(const CoordinateLaw& law, SplitMix64& gen) {
    if (law.kind == CoordinateLaw::Kind::Uniform)
        return law.lower + (law.upper - law.lower) * gen.next_double();
    // Wigner semicircle on [-1, 1] by rejection from the bounding box.
    for (;;) {
        double x = 2.0 * gen.next_double() - 1.0;
        double y = gen.next_double();
        if (y * y <= 1.0 - x * x) return x;
    }
}

}  // namespace

Assignment Design::sample(std::uint64_t seed) const {
    SplitMix64 gen(seed);
    Assignment z = Assignment::zeros(dimension_);
    switch (kind_) {
        case DesignKind::Enumerated: {
            double u = gen.next_double();
            double acc = 0.0;
            for (const auto& [point, p] : support_) {
                acc += p;
                if (u < acc) return point;
            }
            return support_.back().first;
        }
        case DesignKind::Bernoulli: {
            for (int i = 0; i < dimension_; ++i)
                z[i] = gen.next_double() < probs_[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
            return z;
        }
        case DesignKind::CompleteRandomization: {
            // Partial Fisher-Yates: the first m slots of a shuffled index
            // vector receive treatment.
            std::vector<int> idx(static_cast<std::size_t>(dimension_));
            std::iota(idx.begin(), idx.end(), 0);
            for (int i = 0; i < m_treated_; ++i) {
                int j = i + static_cast<int>(gen.next_below(
                                static_cast<std::uint64_t>(dimension_ - i)));
                std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
                z[idx[static_cast<std::size_t>(i)]] = 1.0;
            }
            return z;
        }
        case DesignKind::IndependentContinuous: {
            for (int i = 0; i < dimension_; ++i)
                z[i] = sample_law(laws_[static_cast<std::size_t>(i)], gen);
            return z;
        }
    }
    return z;
}

std::size_t Design::support_size() const {
    switch (kind_) {
        case DesignKind::Enumerated:
            return support_.size();
        case DesignKind::Bernoulli: {
            if (dimension_ >= 63) return static_cast<std::size_t>(-1);
            return std::size_t{1} << dimension_;
        }
        case DesignKind::CompleteRandomization: {
            // Binomial coefficient with overflow saturation.
            long double c = 1.0L;
            for (int i = 0; i < m_treated_; ++i)
                c = c * static_cast<long double>(dimension_ - i) / static_cast<long double>(i + 1);
            if (c > 1e18L) return static_cast<std::size_t>(-1);
            return static_cast<std::size_t>(c + 0.5L);
        }
        case DesignKind::IndependentContinuous:
            throw UnsupportedDesign("continuous designs have no finite support");
    }
    throw UnsupportedDesign("unknown design kind");
}

std::vector<std::pair<Assignment, double>> Design::enumerate_support(std::size_t cap) const {
    if (!enumerable())
        throw UnsupportedDesign("cannot enumerate the support of a continuous design");
    if (support_size() > cap)
        throw DimensionTooLarge("support has " + std::to_string(support_size()) +
                                " points, cap is " + std::to_string(cap));
    switch (kind_) {
        case DesignKind::Enumerated:
            return support_;
        case DesignKind::Bernoulli: {
            std::vector<std::pair<Assignment, double>> out;
            out.reserve(std::size_t{1} << dimension_);
            const std::uint64_t total = std::uint64_t{1} << dimension_;
            for (std::uint64_t mask = 0; mask < total; ++mask) {
                Assignment z = Assignment::zeros(dimension_);
                double p = 1.0;
                for (int i = 0; i < dimension_; ++i) {
                    bool on = (mask >> i) & 1u;
                    z[i] = on ? 1.0 : 0.0;
                    p *= on ? probs_[static_cast<std::size_t>(i)]
                            : 1.0 - probs_[static_cast<std::size_t>(i)];
                }
                if (p > 0.0) out.emplace_back(std::move(z), p);
            }
            return out;
        }
        case DesignKind::CompleteRandomization: {
            std::vector<std::pair<Assignment, double>> out;
            const double p = 1.0 / static_cast<double>(support_size());
            std::vector<int> comb(static_cast<std::size_t>(m_treated_));
            std::iota(comb.begin(), comb.end(), 0);
            for (;;) {
                Assignment z = Assignment::zeros(dimension_);
                for (int c : comb) z[c] = 1.0;
                out.emplace_back(std::move(z), p);
                // next combination in lexicographic order
                int k = m_treated_ - 1;
                while (k >= 0 && comb[static_cast<std::size_t>(k)] == dimension_ - m_treated_ + k)
                    --k;
                if (k < 0) break;
                ++comb[static_cast<std::size_t>(k)];
                for (int j = k + 1; j < m_treated_; ++j)
                    comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
            }
            return out;
        }
        case DesignKind::IndependentContinuous:
            break;
    }
    throw UnsupportedDesign("unreachable");
}

}  // namespace rieszlab
