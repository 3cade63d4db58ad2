#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "seki/errors.hpp"
#include "seki/rng.hpp"
#include "seki/stats.hpp"

using namespace seki;

namespace {

Eigen::MatrixXd example_ensemble() {
    Eigen::MatrixXd u(4, 3);
    u << 1, 0, 0,
        -1, 1, 0,
         0, 1, 0,
         0, 0, 1;
    return u;
}

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols,
                              std::uint64_t seed) {
    Eigen::MatrixXd m(rows, cols);
    RngStream rng(seed, 0, 0, 0);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
    }
    return m;
}

// Independent summation oracle: compensated (Kahan) summation per component.
Eigen::VectorXd kahan_mean(const Eigen::MatrixXd& s) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(s.rows());
    Eigen::VectorXd comp = Eigen::VectorXd::Zero(s.rows());
    for (Eigen::Index k = 0; k < s.cols(); ++k) {
        for (Eigen::Index i = 0; i < s.rows(); ++i) {
            const double y = s(i, k) - comp(i);
            const double t = sum(i) + y;
            comp(i) = (t - sum(i)) - y;
            sum(i) = t;
        }
    }
    return sum / static_cast<double>(s.cols());
}

// Naive double-loop covariance oracle.
Eigen::MatrixXd brute_cross_cov(const Eigen::MatrixXd& u, const Eigen::MatrixXd& g) {
    Eigen::VectorXd um = u.rowwise().mean();
    Eigen::VectorXd gm = g.rowwise().mean();
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(u.rows(), g.rows());
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        for (Eigen::Index j = 0; j < g.rows(); ++j) {
            double acc = 0.0;
            for (Eigen::Index k = 0; k < u.cols(); ++k) {
                acc += (u(i, k) - um(i)) * (g(j, k) - gm(j));
            }
            c(i, j) = acc / static_cast<double>(u.cols());
        }
    }
    return c;
}

}  // namespace

TEST_CASE("sample_mean: worked example and identical members") {
    Eigen::VectorXd mean = stats::sample_mean(example_ensemble());
    Eigen::VectorXd expected(4);
    expected << 1.0 / 3.0, 0.0, 1.0 / 3.0, 1.0 / 3.0;
    CHECK((mean - expected).lpNorm<Eigen::Infinity>() < 1e-15);

    Eigen::VectorXd v = random_matrix(7, 1, 3).col(0);
    Eigen::MatrixXd pair(7, 2);
    pair << v, v;
    CHECK((stats::sample_mean(pair) - v).lpNorm<Eigen::Infinity>() < 1e-15);
}

TEST_CASE("sample_mean matches compensated-summation oracle") {
    Eigen::MatrixXd s = random_matrix(20, 100, 42);
    CHECK((stats::sample_mean(s) - kahan_mean(s)).lpNorm<Eigen::Infinity>() < 1e-13);
}

TEST_CASE("sample_mean rejects degenerate sets") {
    CHECK_THROWS_AS(stats::sample_mean(Eigen::MatrixXd::Zero(3, 1)), StructuralError);
}

TEST_CASE("cross_covariance: worked example") {
    Eigen::MatrixXd g(1, 3);
    g << 1, 0, 0;
    Eigen::MatrixXd c = stats::cross_covariance(example_ensemble(), g);
    Eigen::VectorXd expected(4);
    expected << 2.0 / 9.0, -1.0 / 3.0, -1.0 / 9.0, -1.0 / 9.0;
    CHECK((c.col(0) - expected).lpNorm<Eigen::Infinity>() < 1e-15);
}

TEST_CASE("cross_covariance: zero deviations and oracle") {
    Eigen::MatrixXd u = random_matrix(4, 5, 1);
    Eigen::MatrixXd g_const = Eigen::MatrixXd::Constant(3, 5, 2.5);
    CHECK(stats::cross_covariance(u, g_const).lpNorm<Eigen::Infinity>() == 0.0);

    Eigen::MatrixXd g = random_matrix(6, 5, 2);
    CHECK((stats::cross_covariance(u, g) - brute_cross_cov(u, g))
              .lpNorm<Eigen::Infinity>() < 1e-13);
    // transpose symmetry
    CHECK((stats::cross_covariance(u, g) -
           stats::cross_covariance(g, u).transpose())
              .lpNorm<Eigen::Infinity>() < 1e-13);
}

TEST_CASE("cross_covariance rejects member-count mismatch") {
    CHECK_THROWS_AS(stats::cross_covariance(random_matrix(3, 4, 1),
                                            random_matrix(3, 5, 2)),
                    StructuralError);
}

TEST_CASE("auto_covariance: scalar example, symmetry, PSD") {
    Eigen::MatrixXd g(1, 3);
    g << 1, 0, 0;
    CHECK(stats::auto_covariance(g)(0, 0) == doctest::Approx(2.0 / 9.0).epsilon(1e-14));

    Eigen::MatrixXd r = random_matrix(8, 12, 9);
    Eigen::MatrixXd c = stats::auto_covariance(r);
    CHECK((c - c.transpose()).lpNorm<Eigen::Infinity>() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
    CHECK(es.eigenvalues().minCoeff() > -1e-12 * c.norm());
    CHECK((c - stats::cross_covariance(r, r)).lpNorm<Eigen::Infinity>() < 1e-13);
}

TEST_CASE("corr_decompose: worked example correlations") {
    Eigen::VectorXd c(4);
    c << 2.0 / 9.0, -1.0 / 3.0, -1.0 / 9.0, -1.0 / 9.0;
    Eigen::VectorXd sd_left(4);
    sd_left << std::sqrt(2.0 / 9.0), std::sqrt(2.0 / 3.0), std::sqrt(2.0 / 9.0),
        std::sqrt(2.0 / 9.0);
    Eigen::VectorXd sd_right(1);
    sd_right << std::sqrt(2.0 / 9.0);
    auto d = stats::corr_decompose(c, sd_left, sd_right);
    Eigen::VectorXd expected(4);
    expected << 1.0, -std::sqrt(3.0) / 2.0, -0.5, -0.5;
    CHECK((d.r.col(0) - expected).lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("corr_decompose: degenerate and reconstruction") {
    Eigen::MatrixXd c(2, 2);
    c << 1.0, 0.0, 0.0, 0.0;
    Eigen::VectorXd sd(2);
    sd << 1.0, 0.0;
    auto d = stats::corr_decompose(c, sd, sd);
    CHECK(d.r(0, 1) == 0.0);
    CHECK(d.r(1, 1) == 0.0);

    // random SPD with its own sqrt-diagonal
    Eigen::MatrixXd m = random_matrix(6, 6, 5);
    Eigen::MatrixXd spd = m * m.transpose() + 6.0 * Eigen::MatrixXd::Identity(6, 6);
    Eigen::VectorXd s = spd.diagonal().array().sqrt();
    auto dd = stats::corr_decompose(spd, s, s);
    for (int i = 0; i < 6; ++i) CHECK(dd.r(i, i) == doctest::Approx(1.0).epsilon(1e-13));
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            CHECK(std::abs(dd.r(i, j)) <= 1.0 + 1e-12);
            const double rebuilt = s(i) * dd.r(i, j) * s(j);
            CHECK(rebuilt == doctest::Approx(spd(i, j)).epsilon(1e-12));
        }
    }

    CHECK_THROWS_AS(stats::corr_decompose(c, -sd, sd), ArgumentError);
}

TEST_CASE("spd_solve: identity, diagonal, residual, failure") {
    Eigen::MatrixXd b = random_matrix(4, 2, 11);
    CHECK((stats::spd_solve(Eigen::MatrixXd::Identity(4, 4), b) - b)
              .lpNorm<Eigen::Infinity>() == 0.0);

    Eigen::MatrixXd a(2, 2);
    a << 4, 0, 0, 9;
    Eigen::VectorXd rhs(2);
    rhs << 8, 27;
    Eigen::VectorXd x = stats::spd_solve(a, rhs);
    CHECK(x(0) == doctest::Approx(2.0));
    CHECK(x(1) == doctest::Approx(3.0));

    Eigen::MatrixXd m = random_matrix(50, 50, 13);
    Eigen::MatrixXd big = m * m.transpose() + 50.0 * Eigen::MatrixXd::Identity(50, 50);
    Eigen::MatrixXd rhs2 = random_matrix(50, 3, 17);
    Eigen::MatrixXd sol = stats::spd_solve(big, rhs2);
    CHECK((big * sol - rhs2).norm() / rhs2.norm() < 1e-10);

    Eigen::MatrixXd indef(2, 2);
    indef << 1, 0, 0, -1;
    CHECK_THROWS_AS(stats::spd_solve(indef, rhs), NumericalError);
}

TEST_CASE("mean-centered deviations average to zero") {
    Eigen::MatrixXd s = random_matrix(10, 33, 21);
    Eigen::MatrixXd centered = s.colwise() - stats::sample_mean(s);
    CHECK(stats::sample_mean(centered).lpNorm<Eigen::Infinity>() < 1e-13);
}
