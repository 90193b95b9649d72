#include <doctest.h>

#include <cmath>
#include <set>

#include "rieszlab/basis.hpp"
#include "rieszlab/design.hpp"
#include "rieszlab/moments.hpp"
#include "rieszlab/oracle.hpp"
#include "rieszlab/rng.hpp"

using namespace rieszlab;

TEST_SUITE_BEGIN("designs");

TEST_CASE("sample respects degenerate and constrained supports") {
    Design all_on = Design::bernoulli(5, 1.0);
    for (std::uint64_t seed : {1ULL, 7ULL, 99ULL}) {
        Assignment z = all_on.sample(seed);
        for (double v : z.coords) CHECK(v == 1.0);
    }

    Design cr = Design::complete_randomization(2, 4);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Assignment z = cr.sample(seed);
        int treated = 0;
        for (double v : z.coords) {
            CHECK((v == 0.0 || v == 1.0));
            treated += v == 1.0;
        }
        CHECK(treated == 2);
    }

    Design semi = Design::independent_continuous(
        std::vector<CoordinateLaw>(3, CoordinateLaw::semicircle()));
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Assignment z = semi.sample(seed);
        for (double v : z.coords) {
            CHECK(v >= -1.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("sample is deterministic in the seed") {
    Design d = Design::bernoulli(8, 0.3);
    CHECK(d.sample(1234).coords == d.sample(1234).coords);
    Design semi = Design::independent_continuous(
        std::vector<CoordinateLaw>(4, CoordinateLaw::semicircle()));
    CHECK(semi.sample(99).coords == semi.sample(99).coords);
}

TEST_CASE("enumerate_support lists exact probabilities") {
    auto support = Design::bernoulli(2, 0.5).enumerate_support();
    REQUIRE(support.size() == 4);
    for (const auto& [z, p] : support) CHECK(p == doctest::Approx(0.25).epsilon(1e-14));

    auto cr = Design::complete_randomization(1, 3).enumerate_support();
    REQUIRE(cr.size() == 3);
    for (const auto& [z, p] : cr) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    std::vector<std::pair<Assignment, double>> atoms = {
        {Assignment({1.0}), 0.3}, {Assignment({0.0}), 0.7}};
    auto echoed = Design::enumerated(atoms).enumerate_support();
    REQUIRE(echoed.size() == 2);
    CHECK(echoed[0].second == 0.3);
    CHECK(echoed[1].second == 0.7);

    double total = 0.0;
    for (const auto& [z, p] : Design::bernoulli(10, 0.37).enumerate_support()) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("enumerate_support error paths") {
    Design semi = Design::independent_continuous({CoordinateLaw::semicircle()});
    CHECK_THROWS_AS(semi.enumerate_support(), UnsupportedDesign);
    CHECK_THROWS_AS(Design::bernoulli(30, 0.5).enumerate_support(), DimensionTooLarge);
    CHECK_THROWS_AS(Design::enumerated({{Assignment({1.0}), 0.5}}), UnsupportedDesign);
}

TEST_CASE("moment: bernoulli indicator means") {
    Design d = Design::bernoulli(2, 0.5);
    ExactMomentProvider provider(d);
    ModelSpace space = sutva_space(0);
    CHECK(provider.value({&space.basis[0]}) == doctest::Approx(0.5).epsilon(1e-14));

    // E[(sqrt2 1{Z=1})(sqrt2 1{Z=0})] = 0: disjoint indicators. The
    // enumeration oracle fixes the expected value.
    double oracle = oracle_moment(d, {&space.basis[0], &space.basis[1]}) * 2.0;
    CHECK(oracle == doctest::Approx(0.0));
    CHECK(2.0 * provider.value({&space.basis[0], &space.basis[1]}) ==
          doctest::Approx(oracle).epsilon(1e-14));
}

TEST_CASE("moment: Chebyshev orthonormality under the semicircle law") {
    Design d = Design::independent_continuous({CoordinateLaw::semicircle()});
    ExactMomentProvider provider(d);
    ModelSpace space = chebyshev_space(0, 6);
    for (int k = 0; k <= 6; ++k)
        CHECK(provider.value({&space.basis[static_cast<std::size_t>(k)],
                              &space.basis[static_cast<std::size_t>(k)]}) ==
              doctest::Approx(1.0).epsilon(1e-12));
    for (int k = 0; k < 6; ++k)
        CHECK(provider.value({&space.basis[static_cast<std::size_t>(k)],
                              &space.basis[static_cast<std::size_t>(k + 1)]}) ==
              doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("moment: exact mode equals the enumeration oracle") {
    // Random products of SUTVA and linear-in-means basis functions under
    // three enumerable designs.
    std::vector<Design> designs = {Design::bernoulli(4, 0.3),
                                   Design::complete_randomization(2, 4)};
    SplitMix64 gen(2024);
    for (const Design& d : designs) {
        ExactMomentProvider provider(d);
        std::vector<ModelSpace> spaces;
        for (int i = 0; i < 4; ++i) spaces.push_back(sutva_space(i));
        for (int i = 0; i < 4; ++i)
            spaces.push_back(linear_in_means_space(i, {(i + 1) % 4, (i + 3) % 4}));
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<const BasisFunction*> factors;
            int count = 1 + static_cast<int>(gen.next_below(4));
            for (int f = 0; f < count; ++f) {
                const ModelSpace& s = spaces[gen.next_below(spaces.size())];
                factors.push_back(
                    &s.basis[gen.next_below(static_cast<std::uint64_t>(s.dimension()))]);
            }
            double expected = oracle_moment(d, factors);
            CHECK(provider.value(factors) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("moment: NoExactRoute when nothing applies") {
    // A continuous design has no enumeration; a factor spanning two
    // continuous coordinates with a huge cap exhausts the cartesian rule.
    Design semi = Design::independent_continuous(
        std::vector<CoordinateLaw>(2, CoordinateLaw::semicircle()));
    ExactMomentProvider provider(semi, 16);
    BasisFunction pairwise{"test:pair",
                           [](const Assignment& z) { return z[0] * z[1]; },
                           {0, 1},
                           nullptr};
    CHECK_THROWS_AS(provider.value({&pairwise}), NoExactRoute);
}

TEST_CASE("monte carlo moments are deterministic and close to exact") {
    Design d = Design::bernoulli(3, 0.4);
    ExactMomentProvider exact(d);
    ModelSpace s0 = sutva_space(0);
    ModelSpace s1 = sutva_space(1);

    int hits = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        MonteCarloMomentProvider mc(d, 4000, 1000 + static_cast<std::uint64_t>(t));
        Moment m = mc.moment({&s0.basis[0], &s1.basis[1]});
        CHECK_FALSE(m.exact);
        double truth = exact.value({&s0.basis[0], &s1.basis[1]});
        if (std::abs(m.value - truth) <= 5.0 * m.std_error) ++hits;
    }
    CHECK(hits >= 99);

    MonteCarloMomentProvider a(d, 2000, 7), b(d, 2000, 7);
    CHECK(a.moment({&s0.basis[0]}).value == b.moment({&s0.basis[0]}).value);
}

TEST_CASE("sample marginal frequencies match bernoulli probabilities") {
    const double p = 0.3;
    Design d = Design::bernoulli(2, p);
    const int trials = 100000;
    int count = 0;
    for (int t = 0; t < trials; ++t) count += d.sample(static_cast<std::uint64_t>(t))[0] == 1.0;
    double freq = static_cast<double>(count) / trials;
    CHECK(std::abs(freq - p) <= 4.0 * std::sqrt(p * (1 - p) / trials));
}

TEST_CASE("moment cache dedups permuted descriptors") {
    Design d = Design::bernoulli(2, 0.5);
    ExactMomentProvider provider(d);
    ModelSpace s0 = sutva_space(0);
    ModelSpace s1 = sutva_space(1);
    provider.value({&s0.basis[0], &s1.basis[1]});
    std::size_t after_first = provider.cached_count();
    provider.value({&s1.basis[1], &s0.basis[0]});
    CHECK(provider.cached_count() == after_first);
}

TEST_CASE("uniform coordinate law integrates polynomials exactly") {
    Design d = Design::independent_continuous({CoordinateLaw::uniform(0.0, 1.0),
                                               CoordinateLaw::uniform(-2.0, 2.0)});
    ExactMomentProvider provider(d);
    ModelSpace s0 = polynomial_space(0, 4);
    ModelSpace s1 = polynomial_space(1, 4);
    // E[z_0^k] = 1/(k+1) on [0,1]
    for (int k = 1; k <= 4; ++k)
        CHECK(provider.value({&s0.basis[static_cast<std::size_t>(k)]}) ==
              doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
    // E[z_1^2] = 4/3 on [-2,2]; odd moments vanish
    CHECK(provider.value({&s1.basis[2]}) == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
    CHECK(provider.value({&s1.basis[1]}) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(provider.value({&s1.basis[3]}) == doctest::Approx(0.0).epsilon(1e-13));
    // product across independent coordinates factorizes
    CHECK(provider.value({&s0.basis[1], &s1.basis[2]}) ==
          doctest::Approx(0.5 * 4.0 / 3.0).epsilon(1e-13));
    // sampling stays inside the boxes
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Assignment z = d.sample(seed);
        CHECK(z[0] >= 0.0);
        CHECK(z[0] <= 1.0);
        CHECK(z[1] >= -2.0);
        CHECK(z[1] <= 2.0);
    }
}

TEST_SUITE_END();
