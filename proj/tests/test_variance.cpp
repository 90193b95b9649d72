#include <doctest.h>

#include <cmath>

#include "rieszlab/oracle.hpp"
#include "rieszlab/rng.hpp"
#include "rieszlab/scenario.hpp"

using namespace rieszlab;

TEST_SUITE_BEGIN("variance");

namespace {

Assignment ones(int m) { return Assignment(std::vector<double>(static_cast<std::size_t>(m), 1.0)); }

// The n=1 SUTVA / Bernoulli(0.5) / Horvitz-Thompson reference scenario.
struct Reference {
    Design design = Design::bernoulli(1, 0.5);
    ExactMomentProvider provider{design};
    ModelSpace space = sutva_space(0);
    OrthoBasis ortho;
    RieszRepresentor rep;
    PairAnalysis pair;

    Reference() {
        ortho = gram_schmidt(space, provider);
        rep = build_representor(
            ortho, EffectFunctional::contrast(ones(1), Assignment::zeros(1)));
        pair = analyze_pair(ortho, ortho, rep, rep, provider);
    }
};

ScenarioConfig sutva_config(int n, double p) {
    ScenarioConfig cfg;
    cfg.n = n;
    cfg.design = Design::bernoulli(n, p);
    for (int i = 0; i < n; ++i) cfg.spaces.push_back(sutva_space(i));
    for (int i = 0; i < n; ++i)
        cfg.functionals.push_back(
            EffectFunctional::contrast(ones(n), Assignment::zeros(n)));
    cfg.truth.assign(static_cast<std::size_t>(n), {1.0, 1.0});
    return cfg;
}

}  // namespace

TEST_CASE("variance functional on the reference scenario") {
    Reference ref;
    // e_1 (x) e_2 tensor = phi_1 (x) phi_2, flat index 1 of 4
    Eigen::VectorXd cross = Eigen::VectorXd::Zero(4);
    cross(1) = 1.0;
    CHECK(variance_functional_value(ref.pair, ref.rep, ref.rep, cross) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // y (x) y with y = phi_1 + phi_2: Var(psi(Z)) = (a+c)^2 = 4
    Eigen::VectorXd yy(4);
    yy << 1.0, 1.0, 1.0, 1.0;
    CHECK(variance_functional_value(ref.pair, ref.rep, ref.rep, yy) ==
          doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("variance functional vanishes across independent disjoint units") {
    Design design = Design::bernoulli(2, 0.4);
    ExactMomentProvider provider(design);
    ModelSpace s0 = sutva_space(0), s1 = sutva_space(1);
    OrthoBasis o0 = gram_schmidt(s0, provider), o1 = gram_schmidt(s1, provider);
    auto f = EffectFunctional::contrast(ones(2), Assignment::zeros(2));
    RieszRepresentor r0 = build_representor(o0, f), r1 = build_representor(o1, f);
    PairAnalysis pair = analyze_pair(o0, o1, r0, r1, provider);
    SplitMix64 gen(5);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd coeffs(4);
        for (int k = 0; k < 4; ++k) coeffs(k) = gen.next_double() * 2.0 - 1.0;
        CHECK(variance_functional_value(pair, r0, r1, coeffs) ==
              doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("classification on the reference scenario") {
    Reference ref;
    PairClassification cls = classify_elementary(ref.pair);
    CHECK(cls.pos(0, 0));
    CHECK(cls.pos(1, 1));
    CHECK_FALSE(cls.pos(0, 1));
    CHECK_FALSE(cls.pos(1, 0));
    // the failing cross term takes value 1 on a null tensor
    Eigen::VectorXd values = elementary_basis_values(ref.pair, 0, 1);
    double on_null = ref.pair.tortho.gs.coeff.row(ref.pair.tortho.null_set()[0]).dot(values);
    CHECK(std::abs(on_null) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("classification: disjoint pair fully positive; zero rows positive") {
    Design design = Design::bernoulli(2, 0.5);
    ExactMomentProvider provider(design);
    ModelSpace s0 = sutva_space(0), s1 = sutva_space(1);
    OrthoBasis o0 = gram_schmidt(s0, provider), o1 = gram_schmidt(s1, provider);
    auto f = EffectFunctional::contrast(ones(2), Assignment::zeros(2));
    RieszRepresentor r0 = build_representor(o0, f), r1 = build_representor(o1, f);
    PairAnalysis pair = analyze_pair(o0, o1, r0, r1, provider);
    PairClassification cls = classify_elementary(pair);
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) CHECK(cls.pos(k, l));

    // zero representor rows are identically-zero functionals
    RieszRepresentor zero = r0;
    zero.beta.setZero();
    zero.onb_coeff.setZero();
    PairAnalysis pair_zero = analyze_pair(o0, o0, zero, r0, provider);
    PairClassification cls_zero = classify_elementary(pair_zero);
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) CHECK(cls_zero.pos(k, l));
}

TEST_CASE("assembled bound on the reference scenario") {
    Reference ref;
    PairClassification cls = classify_elementary(ref.pair);
    std::vector<const PairAnalysis*> index = {&ref.pair};
    VarianceBoundSpec spec = assemble_bound({cls}, {}, 1, {2}, index);

    CHECK(spec.Q[0][0] == 1);
    CHECK(spec.Q[0][1] == 1);
    CHECK(spec.sum_Q == 2);
    CHECK(spec.d_indicator[0][0] == 1);
    CHECK(spec.d_indicator[0][1] == 1);

    // B = 2 V_{00} + 2 V_{11}
    REQUIRE(spec.pair_bounds.size() == 1);
    Eigen::VectorXd bound_values = bound_basis_values(spec.pair_bounds[0], ref.pair);
    Eigen::VectorXd expected = 2.0 * elementary_basis_values(ref.pair, 0, 0) +
                               2.0 * elementary_basis_values(ref.pair, 1, 1);
    for (int r = 0; r < 4; ++r)
        CHECK(bound_values(r) == doctest::Approx(expected(r)).epsilon(1e-12));

    // bound at y = (a, c) = (1, 0): 2a^2 + 2c^2 = 2 vs true variance 1
    Eigen::VectorXd y_tensor = Eigen::VectorXd::Zero(4);
    y_tensor(0) = 1.0;  // y (x) y for y = phi_1
    CHECK(bound_values.dot(y_tensor) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(variance_functional_value(ref.pair, ref.rep, ref.rep, y_tensor) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fully positive pairs keep the exact variance functional and Q = 0") {
    Design design = Design::bernoulli(2, 0.5);
    ExactMomentProvider provider(design);
    ModelSpace s0 = sutva_space(0), s1 = sutva_space(1);
    OrthoBasis o0 = gram_schmidt(s0, provider), o1 = gram_schmidt(s1, provider);
    auto f = EffectFunctional::contrast(ones(2), Assignment::zeros(2));
    RieszRepresentor r0 = build_representor(o0, f), r1 = build_representor(o1, f);
    PairAnalysis pair = analyze_pair(o0, o1, r0, r1, provider);
    PairClassification cls = classify_elementary(pair);
    std::vector<const PairAnalysis*> index = {&pair};
    VarianceBoundSpec spec = assemble_bound({cls}, {}, 2, {2, 2}, index);
    CHECK(spec.sum_Q == 0);
    Eigen::VectorXd bound_values = bound_basis_values(spec.pair_bounds[0], pair);
    Eigen::VectorXd theta = variance_functional_basis_values(pair, r0, r1);
    for (int r = 0; r < 4; ++r)
        CHECK(bound_values(r) == doctest::Approx(theta(r)).epsilon(1e-12));
}

TEST_CASE("second-order representor: constant 4 on the reference support") {
    Reference ref;
    PairClassification cls = classify_elementary(ref.pair);
    std::vector<const PairAnalysis*> index = {&ref.pair};
    VarianceBoundSpec spec = assemble_bound({cls}, {}, 1, {2}, index);
    Eigen::VectorXd values = bound_basis_values(spec.pair_bounds[0], ref.pair);

    // B(sigma) = 2 sqrt(2) on both orthonormal tensor elements
    for (int r : ref.pair.tortho.basis_set())
        CHECK(ref.pair.tortho.gs.coeff.row(r).dot(values) ==
              doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));

    SecondOrderRepresentor so = build_second_order_representor(spec.pair_bounds[0], ref.pair);
    CHECK(so.evaluate(ref.space, ref.space, Assignment({1.0})) ==
          doctest::Approx(4.0).epsilon(1e-12));
    CHECK(so.evaluate(ref.space, ref.space, Assignment({0.0})) ==
          doctest::Approx(4.0).epsilon(1e-12));

    // zero bound -> zero representor
    PairBound zero_bound;
    zero_bound.i = zero_bound.j = 0;
    SecondOrderRepresentor so_zero = build_second_order_representor(zero_bound, ref.pair);
    CHECK(so_zero.evaluate(ref.space, ref.space, Assignment({1.0})) == 0.0);
}

TEST_CASE("second-order representor of an independent pair vanishes on support") {
    Design design = Design::bernoulli(2, 0.3);
    ExactMomentProvider provider(design);
    ModelSpace s0 = sutva_space(0), s1 = sutva_space(1);
    OrthoBasis o0 = gram_schmidt(s0, provider), o1 = gram_schmidt(s1, provider);
    auto f = EffectFunctional::contrast(ones(2), Assignment::zeros(2));
    RieszRepresentor r0 = build_representor(o0, f), r1 = build_representor(o1, f);
    PairAnalysis pair = analyze_pair(o0, o1, r0, r1, provider);
    PairClassification cls = classify_elementary(pair);
    std::vector<const PairAnalysis*> index = {&pair};
    VarianceBoundSpec spec = assemble_bound({cls}, {}, 2, {2, 2}, index);
    SecondOrderRepresentor so = build_second_order_representor(spec.pair_bounds[0], pair);
    for (const auto& [z, p] : design.enumerate_support())
        CHECK(so.evaluate(s0, s1, z) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("variance estimate values and skip accounting") {
    // n = 1 reference: Z = 1, Y = 3 -> V-hat = 4 * 9 = 36
    auto pipe1 = Pipeline::build(sutva_config(1, 0.5));
    VarianceEstimate v1 = pipe1->variance_estimate_at(Assignment({1.0}), {3.0});
    CHECK(v1.value == doctest::Approx(36.0).epsilon(1e-12));
    CHECK(pipe1->variance_estimate_at(Assignment({1.0}), {0.0}).value == 0.0);

    // n = 2 disjoint units, cross pairs skipped: V-hat = (V11 + V22) / 4
    auto pipe2 = Pipeline::build(sutva_config(2, 0.5));
    CHECK(pipe2->skipped_pairs().size() == 2);
    Assignment z({1.0, 0.0});
    std::vector<double> y = {3.0, 5.0};
    VarianceEstimate v2 = pipe2->variance_estimate_at(z, y);
    REQUIRE(v2.pair_terms.size() == 2);  // only the diagonal pairs stored
    CHECK(v2.value ==
          doctest::Approx((v2.pair_terms[0] + v2.pair_terms[1]) / 4.0).epsilon(1e-12));
    CHECK(v2.skipped_count == 2);

    CHECK_THROWS_AS(pipe2->variance_estimate_at(z, {1.0}), LengthMismatch);
}

TEST_CASE("confidence intervals: quantile arithmetic, degeneracy, clamping") {
    ConfidenceInterval ci = confidence_interval(6.0, 36.0, 0.05);
    CHECK(ci.radius == doctest::Approx(1.959963985 * 6.0).epsilon(1e-8));
    CHECK(ci.lower() == doctest::Approx(-5.7598).epsilon(1e-4));
    CHECK(ci.upper() == doctest::Approx(17.7598).epsilon(1e-4));
    CHECK_FALSE(ci.clamped);

    ConfidenceInterval degenerate = confidence_interval(2.0, 0.0, 0.05);
    CHECK(degenerate.radius == 0.0);
    CHECK_FALSE(degenerate.clamped);

    ConfidenceInterval clamped = confidence_interval(2.0, -0.1, 0.05);
    CHECK(clamped.radius == 0.0);
    CHECK(clamped.clamped);

    CHECK_THROWS_AS(confidence_interval(0.0, 1.0, 0.0), InvalidAlpha);
    CHECK_THROWS_AS(confidence_interval(0.0, 1.0, 1.5), InvalidAlpha);
}

TEST_CASE("neighbor skip rule") {
    {
        std::vector<ModelSpace> spaces = {sutva_space(0), sutva_space(1), sutva_space(2)};
        auto skipped = second_order_neighbor_skip(spaces, Design::bernoulli(3, 0.5));
        CHECK(skipped.size() == 6);  // all ordered i != j
    }
    {
        std::vector<ModelSpace> spaces;
        for (int i = 0; i < 4; ++i) spaces.push_back(sutva_space(i));
        auto skipped = second_order_neighbor_skip(spaces, Design::complete_randomization(2, 4));
        CHECK(skipped.empty());  // conservative fallback
    }
    {
        const int n = 10;
        std::vector<ModelSpace> spaces;
        for (int i = 0; i < n; ++i)
            spaces.push_back(linear_in_means_space(i, {(i + n - 1) % n, (i + 1) % n}));
        auto skipped = second_order_neighbor_skip(spaces, Design::bernoulli(n, 0.5));
        for (auto [i, j] : skipped) {
            int dist = std::min((i - j + n) % n, (j - i + n) % n);
            CHECK(dist > 2);
        }
        // supports {i-1, i, i+1}: overlap iff circular distance <= 2
        std::size_t expected = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && std::min((i - j + n) % n, (j - i + n) % n) > 2) ++expected;
        CHECK(skipped.size() == expected);
    }
}

TEST_CASE("every assembled term passes second-order positivity") {
    ScenarioConfig cfg;
    cfg.n = 3;
    cfg.design = Design::bernoulli(3, 0.4);
    for (int i = 0; i < 3; ++i)
        cfg.spaces.push_back(linear_in_means_space(i, {(i + 1) % 3, (i + 2) % 3}));
    for (int i = 0; i < 3; ++i)
        cfg.functionals.push_back(EffectFunctional::contrast(ones(3), Assignment::zeros(3)));
    cfg.truth.assign(3, {1.0, 0.5, -0.5});
    auto pipe = Pipeline::build(std::move(cfg));

    for (std::size_t idx = 0; idx < pipe->bound().pair_bounds.size(); ++idx) {
        const PairBound& pb = pipe->bound().pair_bounds[idx];
        const PairAnalysis& pair = pipe->pair_analyses()[idx];
        for (const BoundTerm& term : pb.terms) {
            Eigen::VectorXd values =
                term.type == BoundTerm::Type::Elementary
                    ? elementary_basis_values(pair, term.k, term.l)
                    : diagonal_raw_basis_values(pair, term.k);
            Eigen::MatrixXd table(pair.d_i(), pair.d_j());
            for (int p = 0; p < pair.d_i(); ++p)
                for (int q = 0; q < pair.d_j(); ++q) table(p, q) = values(p * pair.d_j() + q);
            CHECK(test_second_order_positivity(pair.tortho, TableTensorFunctional(table)).holds);
        }
    }
}

TEST_CASE("bound validity and unbiasedness for the bound, by enumeration") {
    // Scenarios mixing the raw-moment route ({1, z} style bases via
    // linear-in-means) and the indicator route (SUTVA, exposure).
    std::vector<ScenarioConfig> configs;
    configs.push_back(sutva_config(2, 0.3));
    {
        ScenarioConfig cfg;
        cfg.n = 3;
        cfg.design = Design::bernoulli(3, 0.45);
        for (int i = 0; i < 3; ++i)
            cfg.spaces.push_back(linear_in_means_space(i, {(i + 1) % 3}));
        for (int i = 0; i < 3; ++i)
            cfg.functionals.push_back(
                EffectFunctional::contrast(ones(3), Assignment::zeros(3)));
        cfg.truth.assign(3, {0.0, 0.0, 0.0});
        configs.push_back(std::move(cfg));
    }
    {
        ScenarioConfig cfg;
        cfg.n = 3;
        cfg.design = Design::complete_randomization(1, 3);
        for (int i = 0; i < 3; ++i) cfg.spaces.push_back(sutva_space(i));
        for (int i = 0; i < 3; ++i) {
            Assignment own = Assignment::zeros(3);
            own[i] = 1.0;
            cfg.functionals.push_back(EffectFunctional::contrast(own, Assignment::zeros(3)));
        }
        cfg.truth.assign(3, {0.0, 0.0});
        configs.push_back(std::move(cfg));
    }

    SplitMix64 gen(2718);
    for (ScenarioConfig& cfg : configs) {
        auto pipe = Pipeline::build(std::move(cfg));
        for (int draw = 0; draw < 100; ++draw) {
            std::vector<std::vector<double>> truth;
            for (const auto& space : pipe->spaces()) {
                std::vector<double> row(static_cast<std::size_t>(space.dimension()));
                for (double& v : row) v = gen.next_double() * 4.0 - 2.0;
                truth.push_back(std::move(row));
            }
            pipe->set_truth(truth);
            OracleResult oracle = oracle_run(pipe->oracle_input(0.05));
            CHECK(oracle.bound_value >= oracle.variance - 1e-9);
            CHECK(oracle.mean_variance_estimate ==
                  doctest::Approx(oracle.bound_value).epsilon(1e-9));
        }
    }
}

TEST_CASE("raw-moment route: the {1, z} basis activates D and stays a bound") {
    // SUTVA truth in the {1, z} parametrization makes V_{1,1,2,2} fail
    // second-order positivity; the assembled bound must still dominate.
    ScenarioConfig cfg;
    cfg.n = 1;
    cfg.design = Design::bernoulli(1, 0.5);
    cfg.spaces.push_back(polynomial_space(0, 1));  // {1, z}
    cfg.functionals.push_back(EffectFunctional::contrast(ones(1), Assignment::zeros(1)));
    cfg.truth = {{1.0, 0.0}};
    auto pipe = Pipeline::build(std::move(cfg));

    const auto& dind = pipe->bound().d_indicator[0];
    CHECK(dind[1] == 0);  // V_{2,2} fails -> raw-moment replacement active
    CHECK(pipe->bound().Q[0][1] == 1);

    // y(1) = a, y(0) = c -> coefficients (c, a - c); bound 2(a^2 + c^2),
    // variance (a + c)^2, E[V-hat] = bound
    SplitMix64 gen(11);
    for (int draw = 0; draw < 50; ++draw) {
        double a = gen.next_double() * 4.0 - 2.0;
        double c = gen.next_double() * 4.0 - 2.0;
        pipe->set_truth({{c, a - c}});
        OracleResult oracle = oracle_run(pipe->oracle_input(0.05));
        CHECK(oracle.variance == doctest::Approx((a + c) * (a + c)).epsilon(1e-10));
        CHECK(oracle.bound_value ==
              doctest::Approx(2.0 * (a * a + c * c)).epsilon(1e-10));
        CHECK(oracle.bound_value >= oracle.variance - 1e-9);
        CHECK(oracle.mean_variance_estimate ==
              doctest::Approx(oracle.bound_value).epsilon(1e-9));
    }
}

TEST_CASE("representor identity on every tensor basis element") {
    ScenarioConfig cfg = sutva_config(2, 0.35);
    auto pipe = Pipeline::build(std::move(cfg));
    for (std::size_t idx = 0; idx < pipe->bound().pair_bounds.size(); ++idx) {
        const PairBound& pb = pipe->bound().pair_bounds[idx];
        const PairAnalysis& pair = pipe->pair_analyses()[idx];
        const SecondOrderRepresentor& so = pipe->second_order_representors()[idx];
        Eigen::VectorXd bound_values = bound_basis_values(pb, pair);
        const ModelSpace& si = pipe->spaces()[static_cast<std::size_t>(pb.i)];
        const ModelSpace& sj = pipe->spaces()[static_cast<std::size_t>(pb.j)];
        for (int p = 0; p < pair.d_i(); ++p)
            for (int q = 0; q < pair.d_j(); ++q) {
                CompensatedSum acc;
                for (const auto& [z, prob] : pipe->design().enumerate_support())
                    acc.add(prob * so.evaluate(si, sj, z) *
                            si.basis[static_cast<std::size_t>(p)].eval(z) *
                            sj.basis[static_cast<std::size_t>(q)].eval(z));
                CHECK(acc.total() ==
                      doctest::Approx(bound_values(p * pair.d_j() + q)).epsilon(1e-9));
            }
    }
}

TEST_CASE("outcome relabeling symmetry of the variance estimate") {
    // swapping two exchangeable units' outcomes leaves V-hat unchanged
    ScenarioConfig cfg;
    cfg.n = 2;
    cfg.design = Design::bernoulli(2, 0.5);
    cfg.spaces = {linear_in_means_space(0, {1}), linear_in_means_space(1, {0})};
    cfg.functionals.assign(2, EffectFunctional::contrast(ones(2), Assignment::zeros(2)));
    cfg.truth.assign(2, {0.0, 0.0, 0.0});
    auto pipe = Pipeline::build(std::move(cfg));
    Assignment z({1.0, 1.0});
    double forward = pipe->variance_estimate_at(z, {2.0, -3.0}).value;
    double swapped = pipe->variance_estimate_at(z, {-3.0, 2.0}).value;
    CHECK(forward == doctest::Approx(swapped).epsilon(1e-12));
}

TEST_CASE("bound validity and unbiasedness on a continuous design (quadrature)") {
    // Semicircle design with a Chebyshev space and the gradient
    // functional: expectations of polynomial closures are exact on the
    // 64-node rule.
    ScenarioConfig cfg;
    cfg.n = 1;
    cfg.design = Design::independent_continuous({CoordinateLaw::semicircle()});
    cfg.spaces.push_back(chebyshev_space(0, 3));
    cfg.functionals.push_back(EffectFunctional::derivative(Assignment::zeros(1), {1.0}));
    cfg.truth = {{0.3, -0.2, 0.5, 0.1}};
    auto pipe = Pipeline::build(std::move(cfg));

    SplitMix64 gen(3131);
    for (int draw = 0; draw < 25; ++draw) {
        std::vector<double> y(4);
        for (double& v : y) v = gen.next_double() * 2.0 - 1.0;
        pipe->set_truth({y});

        const ModelSpace& space = pipe->spaces()[0];
        const RieszRepresentor& rep = pipe->representors()[0];
        auto psi_y = [&](const Assignment& z) {
            return rep.evaluate(space, z) * space.evaluate(y, z);
        };
        double mean = expectation(pipe->design(), psi_y, {0});
        double second = expectation(
            pipe->design(), [&](const Assignment& z) { double v = psi_y(z); return v * v; },
            {0});
        double variance = second - mean * mean;
        // unbiasedness through the quadrature route
        CHECK(mean ==
              doctest::Approx(pipe->functionals()[0].apply(space, y)).epsilon(1e-10));

        double expected_vhat = expectation(
            pipe->design(),
            [&](const Assignment& z) {
                return pipe->variance_estimate_at(z, {space.evaluate(y, z)}).value;
            },
            {0});
        // VB from the assembled term closures, integrated the same way
        OracleInput input = pipe->oracle_input(0.05);
        double bound = 0.0;
        for (const OracleBoundTerm& term : input.bound_terms) {
            double efg = expectation(
                pipe->design(),
                [&](const Assignment& z) { return term.f(z) * term.g(z); }, {0});
            double value = efg;
            if (term.subtract_means) {
                double ef = expectation(pipe->design(), term.f, {0});
                double eg = expectation(pipe->design(), term.g, {0});
                value -= ef * eg;
            }
            bound += term.weight * value;
        }
        CHECK(expected_vhat == doctest::Approx(bound).epsilon(1e-9));
        CHECK(bound >= variance - 1e-9);
    }
}

TEST_SUITE_END();
