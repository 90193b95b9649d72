#ifndef RIESZLAB_DESIGN_HPP
#define RIESZLAB_DESIGN_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "rieszlab/errors.hpp"

namespace rieszlab {

// One point z in the intervention set. Binary designs restrict the
// coordinates to {0, 1}; continuous designs use real coordinates.
struct Assignment {
    std::vector<double> coords;

    Assignment() = default;
    explicit Assignment(std::vector<double> c) : coords(std::move(c)) {}
    static Assignment zeros(int dim) { return Assignment(std::vector<double>(dim, 0.0)); }

    int dimension() const { return static_cast<int>(coords.size()); }
    double operator[](int i) const { return coords[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return coords[static_cast<std::size_t>(i)]; }

    bool operator==(const Assignment& other) const { return coords == other.coords; }
};

enum class DesignKind { Enumerated, Bernoulli, CompleteRandomization, IndependentContinuous };

struct CoordinateLaw {
    enum class Kind { Semicircle, Uniform } kind;
    double lower = -1.0;  // uniform bounds; semicircle is fixed to [-1, 1]
    double upper = 1.0;

    static CoordinateLaw semicircle() { return {Kind::Semicircle, -1.0, 1.0}; }
    static CoordinateLaw uniform(double a, double b) { return {Kind::Uniform, a, b}; }
};

constexpr std::size_t kDefaultEnumerationCap = 1u << 16;

// The treatment distribution: the sole source of randomness. Immutable
// after construction; sampling and support enumeration are const.
class Design {
public:
    static Design enumerated(std::vector<std::pair<Assignment, double>> support,
                             bool independent_coordinates = false);
    static Design bernoulli(std::vector<double> probabilities);
    static Design bernoulli(int dimension, double p);
    static Design complete_randomization(int m_treated, int dimension);
    static Design independent_continuous(std::vector<CoordinateLaw> laws);

    DesignKind kind() const { return kind_; }
    int dimension() const { return dimension_; }

    // True when the coordinates of Z are mutually independent under the law.
    bool independent_coordinates() const;
    // True when the support is finite and can be listed exactly.
    bool enumerable() const;
    bool binary() const;

    const std::vector<double>& bernoulli_probabilities() const { return probs_; }
    int m_treated() const { return m_treated_; }
    const std::vector<CoordinateLaw>& laws() const { return laws_; }

    // Draw one assignment. Deterministic for a fixed seed.
    Assignment sample(std::uint64_t seed) const;

    // Full support with exact probabilities (sum to 1 within 1e-12).
    // Throws UnsupportedDesign for continuous designs and DimensionTooLarge
    // when the support would exceed `cap` points.
    std::vector<std::pair<Assignment, double>> enumerate_support(
        std::size_t cap = kDefaultEnumerationCap) const;

    std::size_t support_size() const;  // throws UnsupportedDesign if not enumerable

private:
    Design() = default;

    DesignKind kind_ = DesignKind::Bernoulli;
    int dimension_ = 0;
    std::vector<std::pair<Assignment, double>> support_;  // enumerated
    bool enumerated_independent_ = false;
    std::vector<double> probs_;        // bernoulli
    int m_treated_ = 0;                // complete randomization
    std::vector<CoordinateLaw> laws_;  // independent continuous
};

}  // namespace rieszlab

#endif
