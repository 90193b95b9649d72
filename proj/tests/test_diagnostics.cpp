#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "rieszlab/oracle.hpp"
#include "rieszlab/rng.hpp"
#include "rieszlab/scenario.hpp"

using namespace rieszlab;

TEST_SUITE_BEGIN("diagnostics");

namespace {

Assignment ones(int m) { return Assignment(std::vector<double>(static_cast<std::size_t>(m), 1.0)); }

ScenarioConfig sutva_config(int n, double p) {
    ScenarioConfig cfg;
    cfg.n = n;
    cfg.design = Design::bernoulli(n, p);
    for (int i = 0; i < n; ++i) cfg.spaces.push_back(sutva_space(i));
    for (int i = 0; i < n; ++i)
        cfg.functionals.push_back(EffectFunctional::contrast(ones(n), Assignment::zeros(n)));
    cfg.truth.assign(static_cast<std::size_t>(n), {1.0, 1.0});
    cfg.with_variance = false;
    return cfg;
}

Eigen::VectorXd onb_truth(const Pipeline& pipe, const VarianceMatrix& H) {
    Eigen::VectorXd a(H.H.rows());
    for (Eigen::Index r = 0; r < H.H.rows(); ++r) {
        auto [unit, l] = H.index[static_cast<std::size_t>(r)];
        const auto& truth = pipe.config().truth[static_cast<std::size_t>(unit)];
        Eigen::VectorXd coeffs =
            Eigen::Map<const Eigen::VectorXd>(truth.data(), static_cast<Eigen::Index>(truth.size()));
        a(r) = onb_coefficients(pipe.orthos()[static_cast<std::size_t>(unit)], coeffs)(l);
    }
    return a;
}

}  // namespace

TEST_CASE("H matrix on the reference scenario is [[2,2],[2,2]]") {
    auto pipe = Pipeline::build(sutva_config(1, 0.5));
    VarianceMatrix H = variance_matrix(pipe->orthos(), pipe->representors(), pipe->provider());
    REQUIRE(H.H.rows() == 2);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) CHECK(H.H(r, c) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(H.lambda_max() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(operator_norm(H) == doctest::Approx(2.0).epsilon(1e-12));

    // PSD factor reproduces H
    Eigen::MatrixXd F = H.factor();
    Eigen::MatrixXd rebuilt = F.transpose() * F;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) CHECK(rebuilt(r, c) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("zero representors give the zero matrix; disjoint units block-diagonalize") {
    auto pipe = Pipeline::build(sutva_config(2, 0.4));
    std::vector<RieszRepresentor> zeros = pipe->representors();
    for (auto& rep : zeros) {
        rep.beta.setZero();
        rep.onb_coeff.setZero();
    }
    VarianceMatrix H0 = variance_matrix(pipe->orthos(), zeros, pipe->provider());
    CHECK(H0.H.cwiseAbs().maxCoeff() == doctest::Approx(0.0));

    VarianceMatrix H = variance_matrix(pipe->orthos(), pipe->representors(), pipe->provider());
    REQUIRE(H.H.rows() == 4);
    // cross-unit blocks vanish
    for (int r = 0; r < 2; ++r)
        for (int c = 2; c < 4; ++c) CHECK(H.H(r, c) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("quadratic form identity against the enumeration oracle") {
    std::vector<ScenarioConfig> configs;
    configs.push_back(sutva_config(3, 0.3));
    {
        ScenarioConfig cfg;
        cfg.n = 4;
        cfg.design = Design::bernoulli(4, 0.45);
        for (int i = 0; i < 4; ++i)
            cfg.spaces.push_back(linear_in_means_space(i, {(i + 1) % 4, (i + 3) % 4}));
        for (int i = 0; i < 4; ++i)
            cfg.functionals.push_back(EffectFunctional::contrast(ones(4), Assignment::zeros(4)));
        cfg.truth.assign(4, {0.0, 0.0, 0.0});
        cfg.with_variance = false;
        configs.push_back(std::move(cfg));
    }
    SplitMix64 gen(515);
    for (ScenarioConfig& cfg : configs) {
        auto pipe = Pipeline::build(std::move(cfg));
        VarianceMatrix H =
            variance_matrix(pipe->orthos(), pipe->representors(), pipe->provider());
        for (int draw = 0; draw < 100; ++draw) {
            std::vector<std::vector<double>> truth;
            for (const auto& space : pipe->spaces()) {
                std::vector<double> row(static_cast<std::size_t>(space.dimension()));
                for (double& v : row) v = gen.next_double() * 4.0 - 2.0;
                truth.push_back(std::move(row));
            }
            pipe->set_truth(truth);
            OracleResult oracle = oracle_run(pipe->oracle_input(0.05));
            double quad = exact_variance_quadratic(H, onb_truth(*pipe, H));
            CHECK(quad == doctest::Approx(oracle.variance).epsilon(1e-9));
        }
    }
}

TEST_CASE("reference quadratic values") {
    auto pipe = Pipeline::build(sutva_config(1, 0.5));
    VarianceMatrix H = variance_matrix(pipe->orthos(), pipe->representors(), pipe->provider());
    // y with a = c = 1: orthonormal coefficients (1/sqrt2, 1/sqrt2), Var 4
    Eigen::VectorXd a(2);
    a << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    CHECK(exact_variance_quadratic(H, a) == doctest::Approx(4.0).epsilon(1e-12));
    // y = 0
    CHECK(exact_variance_quadratic(H, Eigen::VectorXd::Zero(2)) == doctest::Approx(0.0));
    // a = 1, c = 0: Var = 1
    pipe->set_truth({{1.0, 0.0}});
    CHECK(exact_variance_quadratic(H, onb_truth(*pipe, H)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(exact_variance_quadratic(H, Eigen::VectorXd::Zero(5)), LengthMismatch);
}

TEST_CASE("sharpness: the top eigenvector attains the operator norm") {
    auto pipe = Pipeline::build(sutva_config(2, 0.25));
    VarianceMatrix H = variance_matrix(pipe->orthos(), pipe->representors(), pipe->provider());
    Eigen::VectorXd top = H.eigenvectors.col(H.eigenvectors.cols() - 1);
    double rayleigh = top.dot(H.H * top);
    CHECK(rayleigh >= (1.0 - 1e-9) * H.lambda_max());
}

TEST_CASE("operator norm basics") {
    VarianceMatrix H;
    H.H = Eigen::MatrixXd::Zero(3, 3);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s0(H.H);
    H.eigenvalues = s0.eigenvalues();
    H.eigenvectors = s0.eigenvectors();
    CHECK(operator_norm(H) == 0.0);

    H.H = Eigen::MatrixXd::Identity(3, 3);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s1(H.H);
    H.eigenvalues = s1.eigenvalues();
    H.eigenvectors = s1.eigenvectors();
    CHECK(operator_norm(H) == doctest::Approx(1.0));
}

TEST_CASE("worst-case rmse and consistency bound arithmetic") {
    CHECK(worst_case_rmse(2.0, 1.0, 1) == doctest::Approx(2.0));
    CHECK(worst_case_rmse(2.0, 1.0, 100) == doctest::Approx(0.2));
    CHECK(worst_case_rmse(2.0, 0.0, 10) == 0.0);

    CHECK(consistency_bound(1.0, 1.0, 2.0, 1, 4.0, 4.0) == doctest::Approx(2.0));
    CHECK(consistency_bound(0.0, 1.0, 2.0, 5, 4.0, 4.0) == 0.0);
    CHECK(consistency_bound(5.0, 1.0, 2.0, 100, 4.0, 4.0) ==
          doctest::Approx(std::sqrt(5.0) * 2.0 / 10.0).epsilon(1e-12));
    CHECK_THROWS_AS(consistency_bound(1.0, 1.0, 1.0, 10, 3.0, 4.0), InvalidConjugatePair);

    // 1/p + 1/(2q) = 1/4 with p >= 4, q >= 2
    CHECK(variance_conjugate_pair_ok(8.0, 4.0));
    CHECK(variance_conjugate_pair_ok(6.0, 6.0));
    CHECK_FALSE(variance_conjugate_pair_ok(4.0, 4.0));
    CHECK_FALSE(variance_conjugate_pair_ok(8.0, 1.0));
}

TEST_CASE("max-p norms on the reference scenario") {
    auto pipe = Pipeline::build(sutva_config(1, 0.5));
    // ||y||_{max,4} = 1 at a = c = 1; ||psi||_{max,4} = 2
    CHECK(max_p_norm(pipe->spaces(), pipe->config().truth, pipe->design(), 4.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    std::vector<std::vector<double>> rep_coeffs = {{2.0, -2.0}};
    CHECK(max_p_norm(pipe->spaces(), rep_coeffs, pipe->design(), 4.0) ==
          doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("ordering: exact rmse below both bounds on enumerable scenarios") {
    std::vector<double> ps = {0.3, 0.5, 0.7};
    for (double p : ps) {
        for (int n : {1, 2, 4}) {
            auto pipe = Pipeline::build(sutva_config(n, p));
            VarianceMatrix H =
                variance_matrix(pipe->orthos(), pipe->representors(), pipe->provider());
            OracleResult oracle = oracle_run(pipe->oracle_input(0.05));
            double rmse = std::sqrt(oracle.variance);  // unbiased estimator

            DiagnosticsReport report = pipe->diagnostics(4.0, 4.0, 1e-8);
            CHECK(rmse <= report.consistency_rmse_bound + 1e-9);
            CHECK(rmse <= report.worst_case_rmse_bound + 1e-9);
            CHECK(report.exact_variance == doctest::Approx(oracle.variance).epsilon(1e-9));
        }
    }
}

TEST_SUITE_END();
