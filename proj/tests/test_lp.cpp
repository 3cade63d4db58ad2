#include <doctest.h>

#include <atomic>
#include <cmath>
#include <memory>

#include "seki/eki.hpp"
#include "seki/errors.hpp"
#include "seki/lp.hpp"
#include "seki/models/linear.hpp"
#include "seki/rng.hpp"

using namespace seki;

namespace {

// Counts inner evaluations; used to pin the one-G-call-per-f-call contract.
class CountingModel : public ForwardModel {
public:
    explicit CountingModel(std::shared_ptr<const ForwardModel> inner)
        : inner_(std::move(inner)) {}
    Eigen::Index input_dim() const override { return inner_->input_dim(); }
    Eigen::Index output_dim() const override { return inner_->output_dim(); }
    Eigen::VectorXd evaluate(const Eigen::VectorXd& u) const override {
        ++calls;
        return inner_->evaluate(u);
    }
    mutable std::atomic<long> calls{0};

private:
    std::shared_ptr<const ForwardModel> inner_;
};

Eigen::VectorXd random_vector(Eigen::Index n, std::uint64_t seed, double scale) {
    RngStream rng(seed, 0, 0, 0);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = scale * rng.normal();
    return v;
}

}  // namespace

TEST_CASE("psi: identity at p = 2 and square root at p = 1") {
    Eigen::VectorXd u = random_vector(8, 1, 3.0);
    CHECK((lp::psi(u, 2.0) - u).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(lp::psi(4.0, 1.0) == doctest::Approx(2.0));
    CHECK(lp::psi(-9.0, 1.0) == doctest::Approx(-3.0));
    CHECK(lp::psi(0.0, 0.7) == 0.0);
    // the l2 norm of the transformed vector carries the lp penalty
    for (double p : {0.7, 1.0, 1.5}) {
        CHECK(lp::psi(u, p).squaredNorm() ==
              doctest::Approx(u.array().abs().pow(p).sum()).epsilon(1e-12));
    }
}

TEST_CASE("xi: identity at p = 2 and the square at p = 1") {
    Eigen::VectorXd v = random_vector(8, 2, 3.0);
    CHECK((lp::xi(v, 2.0) - v).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(lp::xi(2.0, 1.0) == doctest::Approx(4.0));
}

TEST_CASE("psi and xi are mutually inverse for all supported p") {
    for (double p : {0.7, 1.0, 1.5, 2.0}) {
        Eigen::VectorXd u = random_vector(50, 7, 5.0);
        CHECK((lp::xi(lp::psi(u, p), p) - u).lpNorm<Eigen::Infinity>() < 1e-12);
        CHECK((lp::psi(lp::xi(u, p), p) - u).lpNorm<Eigen::Infinity>() < 1e-12);
    }
}

TEST_CASE("RegularizationConfig guards p and lambda") {
    CHECK_THROWS_AS((RegularizationConfig{0.4, 1.0}).validate(), ConfigError);
    CHECK_THROWS_AS((RegularizationConfig{1.0, 0.0}).validate(), ConfigError);
    CHECK_NOTHROW((RegularizationConfig{0.5, 1e-3}).validate());
}

TEST_CASE("augment: block structure collapses for lambda = 1, Gamma = I") {
    const int n = 3, mdim = 2;
    auto g = std::make_shared<models::LinearModel>(
        models::random_gaussian_matrix(mdim, n, 4));
    MeasurementModel m = MeasurementModel::diagonal(
        Eigen::VectorXd::Ones(mdim), Eigen::VectorXd::Ones(mdim));

    AugmentedProblem aug = augment(g, m, RegularizationConfig{2.0, 1.0});
    CHECK(aug.measurement.dim() == n + mdim);
    CHECK((aug.measurement.gamma() - Eigen::MatrixXd::Identity(n + mdim, n + mdim))
              .lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(aug.measurement.y().head(mdim) == Eigen::VectorXd::Ones(mdim));
    CHECK(aug.measurement.y().tail(n).lpNorm<Eigen::Infinity>() == 0.0);

    // p = 2: f(v) = (G(v), v) with no transform
    Eigen::VectorXd v = random_vector(n, 5, 2.0);
    Eigen::VectorXd fv = aug.f->evaluate(v);
    CHECK((fv.head(mdim) - g->evaluate(v)).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((fv.tail(n) - v).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("augmented misfit identity on random inputs") {
    const int n = 6, mdim = 4;
    auto g = std::make_shared<models::LinearModel>(
        models::random_gaussian_matrix(mdim, n, 6));
    Eigen::VectorXd y = random_vector(mdim, 8, 1.0);
    Eigen::VectorXd gamma = random_vector(mdim, 9, 0.0).array().abs() + 0.2;
    MeasurementModel m = MeasurementModel::diagonal(y, gamma);

    for (double p : {1.0, 1.5, 2.0}) {
        RegularizationConfig reg{p, 3.7};
        AugmentedProblem aug = augment(g, m, reg);
        for (int trial = 0; trial < 20; ++trial) {
            Eigen::VectorXd v = random_vector(n, 100 + trial, 1.5);
            const double lhs =
                aug.measurement.weighted_misfit(aug.measurement.y() -
                                                aug.f->evaluate(v));
            const double rhs =
                reg.lambda * v.squaredNorm() +
                m.weighted_misfit(y - g->evaluate(lp::xi(v, p)));
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
        }
    }
}

TEST_CASE("objective equivalence through the change of variables") {
    const int n = 5, mdim = 3;
    auto g = std::make_shared<models::LinearModel>(
        models::random_gaussian_matrix(mdim, n, 14));
    Eigen::VectorXd y = random_vector(mdim, 15, 1.0);
    MeasurementModel m = MeasurementModel::diagonal(
        y, Eigen::VectorXd::Constant(mdim, 0.5));

    for (double p : {0.7, 1.0, 2.0}) {
        RegularizationConfig reg{p, 2.0};
        AugmentedProblem aug = augment(g, m, reg);
        for (int trial = 0; trial < 10; ++trial) {
            Eigen::VectorXd u = random_vector(n, 200 + trial, 1.2);
            const double lhs = aug.measurement.weighted_misfit(
                aug.measurement.y() - aug.f->evaluate(lp::psi(u, p)));
            const double rhs =
                reg.lambda * u.array().abs().pow(p).sum() +
                m.weighted_misfit(y - g->evaluate(u));
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
        }
    }
}

TEST_CASE("augmented model makes exactly one inner call per evaluation") {
    auto counted = std::make_shared<CountingModel>(
        std::make_shared<models::IdentityModel>(4));
    MeasurementModel m = MeasurementModel::diagonal(
        Eigen::VectorXd::Ones(4), Eigen::VectorXd::Ones(4));
    AugmentedProblem aug = augment(counted, m, RegularizationConfig{1.0, 2.0});
    for (int i = 1; i <= 5; ++i) {
        aug.f->evaluate(random_vector(4, i, 1.0));
        CHECK(counted->calls.load() == i);
    }
}

TEST_CASE("lp_run: p = 2 linear problem matches the Tikhonov closed form") {
    const int n = 5, mdim = 3;
    Eigen::MatrixXd a = models::random_gaussian_matrix(mdim, n, 44);
    auto g = std::make_shared<models::LinearModel>(a);
    Eigen::VectorXd y = random_vector(mdim, 45, 1.0);
    Eigen::VectorXd gamma = Eigen::VectorXd::Constant(mdim, 0.1);
    MeasurementModel m = MeasurementModel::diagonal(y, gamma);
    RegularizationConfig reg{2.0, 0.5};

    RunConfig cfg;
    cfg.ensemble_size = 8000;
    cfg.n_iterations = 40;
    cfg.rng_seed = 5;
    cfg.init_mean = Eigen::VectorXd::Zero(n);
    cfg.init_variance = Eigen::VectorXd::Ones(n);

    RunRecord rec = lp_run(g, m, reg, cfg);

    Eigen::MatrixXd gi = gamma.cwiseInverse().asDiagonal();
    Eigen::MatrixXd lhs = a.transpose() * gi * a +
                          reg.lambda * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd tikhonov = lhs.ldlt().solve(a.transpose() * gi * y);
    CHECK((rec.final().estimate - tikhonov).norm() / tikhonov.norm() < 0.03);
}

TEST_CASE("lp_run: larger lambda shrinks the estimate (p = 2)") {
    const int n = 4, mdim = 4;
    Eigen::MatrixXd a = models::random_gaussian_matrix(mdim, n, 64);
    auto g = std::make_shared<models::LinearModel>(a);
    Eigen::VectorXd y = random_vector(mdim, 65, 2.0);
    MeasurementModel m = MeasurementModel::diagonal(
        y, Eigen::VectorXd::Constant(mdim, 0.1));

    RunConfig cfg;
    cfg.ensemble_size = 2000;
    cfg.n_iterations = 25;
    cfg.rng_seed = 6;
    cfg.init_mean = Eigen::VectorXd::Zero(n);
    cfg.init_variance = Eigen::VectorXd::Ones(n);

    RunRecord weak = lp_run(g, m, RegularizationConfig{2.0, 0.1}, cfg);
    RunRecord strong = lp_run(g, m, RegularizationConfig{2.0, 10.0}, cfg);
    CHECK(strong.final().estimate.norm() < weak.final().estimate.norm());
}
