#include <doctest.h>

#include <cmath>

#include "seki/errors.hpp"
#include "seki/rng.hpp"
#include "seki/sec.hpp"
#include "seki/stats.hpp"

using namespace seki;

namespace {

Eigen::MatrixXd random_correlations(Eigen::Index rows, Eigen::Index cols,
                                    std::uint64_t seed) {
    Eigen::MatrixXd m(rows, cols);
    RngStream rng(seed, 0, 0, 0);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            m(i, j) = 2.0 * rng.uniform() - 1.0;
        }
    }
    return m;
}

}  // namespace

TEST_CASE("correction_factor: boundary and worked values") {
    CHECK(sec::correction_factor(1.0, 2.5) == 1.0);
    CHECK(sec::correction_factor(-1.0, 0.3) == 1.0);
    CHECK(sec::correction_factor(0.42, 0.0) == 1.0);
    CHECK(sec::correction_factor(-std::sqrt(3.0) / 2.0, 1.0) ==
          doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
    // corrected covariance entry of the worked example
    const double corrected = (-1.0 / 3.0) *
                             sec::correction_factor(-std::sqrt(3.0) / 2.0, 1.0);
    CHECK(corrected == doctest::Approx(-std::sqrt(3.0) / 6.0).epsilon(1e-15));
    CHECK_THROWS_AS(sec::correction_factor(1.1, 1.0), ArgumentError);
    CHECK_THROWS_AS(sec::correction_factor(0.5, -1.0), ArgumentError);
}

TEST_CASE("correction_factor is monotone in |r|") {
    double prev = 0.0;
    for (double r = 0.05; r <= 1.0; r += 0.05) {
        const double s = sec::correction_factor(r, 1.7);
        CHECK(s >= prev);
        prev = s;
    }
}

TEST_CASE("correct_correlation_matrix: worked example and identity") {
    Eigen::MatrixXd r(4, 1);
    r << 1.0, -std::sqrt(3.0) / 2.0, -0.5, -0.5;
    Eigen::MatrixXd out = sec::correct_correlation_matrix(r, 1.0);
    Eigen::VectorXd expected(4);
    expected << 1.0, -0.75, -0.25, -0.25;
    CHECK((out.col(0) - expected).lpNorm<Eigen::Infinity>() < 1e-15);

    Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(5, 5);
    CHECK((sec::correct_correlation_matrix(eye, 3.0) - eye)
              .lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("correct_correlation_matrix matches scalar loop for a = 2") {
    Eigen::MatrixXd r = random_correlations(7, 9, 77);
    Eigen::MatrixXd out = sec::correct_correlation_matrix(r, 2.0);
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
        for (Eigen::Index i = 0; i < r.rows(); ++i) {
            const double v = r(i, j);
            const double want = (v >= 0 ? 1.0 : -1.0) * std::pow(std::abs(v), 3.0);
            CHECK(out(i, j) == doctest::Approx(want).epsilon(1e-14));
            // shrinkage and sign preservation
            CHECK(std::abs(out(i, j)) <= std::abs(v) + 1e-15);
            if (v != 0.0) CHECK(out(i, j) * v >= 0.0);
        }
    }
}

TEST_CASE("corrected_covariances: worked example with a = 1") {
    Eigen::MatrixXd c_ug(4, 1);
    c_ug << 2.0 / 9.0, -1.0 / 3.0, -1.0 / 9.0, -1.0 / 9.0;
    Eigen::MatrixXd c_gg(1, 1);
    c_gg << 2.0 / 9.0;
    Eigen::VectorXd sd_u(4);
    sd_u << std::sqrt(2.0 / 9.0), std::sqrt(2.0 / 3.0), std::sqrt(2.0 / 9.0),
        std::sqrt(2.0 / 9.0);
    Eigen::VectorXd sd_g(1);
    sd_g << std::sqrt(2.0 / 9.0);

    auto [cu, cg] = sec::corrected_covariances(c_ug, c_gg, sd_u, sd_g,
                                               SecConfig{true, 1.0});
    Eigen::VectorXd expected(4);
    expected << 2.0 / 9.0, -std::sqrt(3.0) / 6.0, -1.0 / 18.0, -1.0 / 18.0;
    CHECK((cu.col(0) - expected).lpNorm<Eigen::Infinity>() < 1e-14);
    CHECK(cg(0, 0) == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("corrected_covariances: disabled and a = 0 return inputs exactly") {
    Eigen::MatrixXd c_ug = random_correlations(3, 2, 5);
    Eigen::MatrixXd c_gg(2, 2);
    c_gg << 2.0, 0.3, 0.3, 1.5;
    Eigen::VectorXd sd_u(3), sd_g(2);
    sd_u << 1, 1, 1;
    sd_g = c_gg.diagonal().array().sqrt();

    for (SecConfig cfg : {SecConfig{false, 2.0}, SecConfig{true, 0.0}}) {
        auto [cu, cg] = sec::corrected_covariances(c_ug, c_gg, sd_u, sd_g, cfg);
        CHECK((cu - c_ug).lpNorm<Eigen::Infinity>() == 0.0);
        CHECK((cg - c_gg).lpNorm<Eigen::Infinity>() == 0.0);
    }
}

TEST_CASE("corrected_covariances matches decompose-correct-reassemble oracle") {
    RngStream rng(123, 0, 0, 0);
    Eigen::MatrixXd samples_u(6, 10);
    Eigen::MatrixXd samples_g(6, 10);
    for (Eigen::Index j = 0; j < 10; ++j) {
        for (Eigen::Index i = 0; i < 6; ++i) {
            samples_u(i, j) = rng.normal();
            samples_g(i, j) = rng.normal() + 0.4 * samples_u(i, j);
        }
    }
    Eigen::MatrixXd c_ug = stats::cross_covariance(samples_u, samples_g);
    Eigen::MatrixXd c_gg = stats::auto_covariance(samples_g);
    Eigen::VectorXd sd_u = stats::component_stddev(samples_u);
    Eigen::VectorXd sd_g = c_gg.diagonal().array().sqrt();

    const double a = 0.5;
    auto [cu, cg] = sec::corrected_covariances(c_ug, c_gg, sd_u, sd_g,
                                               SecConfig{true, a});

    auto d_ug = stats::corr_decompose(c_ug, sd_u, sd_g);
    auto d_gg = stats::corr_decompose(c_gg, sd_g, sd_g);
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            const double r1 = d_ug.r(i, j);
            const double want_u =
                sd_u(i) * ((r1 >= 0 ? 1 : -1) * std::pow(std::abs(r1), a + 1)) * sd_g(j);
            CHECK(cu(i, j) == doctest::Approx(want_u).epsilon(1e-12));
            const double r2 = d_gg.r(i, j);
            const double want_g =
                sd_g(i) * ((r2 >= 0 ? 1 : -1) * std::pow(std::abs(r2), a + 1)) * sd_g(j);
            CHECK(cg(i, j) == doctest::Approx(want_g).epsilon(1e-12));
            // element-wise shrinkage against the raw covariances
            CHECK(std::abs(cu(i, j)) <= std::abs(c_ug(i, j)) + 1e-12);
            CHECK(std::abs(cg(i, j)) <= std::abs(c_gg(i, j)) + 1e-12);
        }
    }
    // symmetric with preserved diagonal
    CHECK((cg - cg.transpose()).lpNorm<Eigen::Infinity>() == 0.0);
    for (int i = 0; i < 6; ++i) {
        CHECK(cg(i, i) == doctest::Approx(c_gg(i, i)).epsilon(1e-12));
    }
}

TEST_CASE("corrected_covariances rejects inconsistent standard deviations") {
    Eigen::MatrixXd c_gg = Eigen::MatrixXd::Identity(2, 2);
    Eigen::MatrixXd c_ug = Eigen::MatrixXd::Ones(2, 2);
    Eigen::VectorXd sd(2);
    sd << 1.0, 2.0;  // sd^2 != diag
    CHECK_THROWS_AS(
        sec::corrected_covariances(c_ug, c_gg, sd, sd, SecConfig{true, 1.0}),
        ArgumentError);
}
