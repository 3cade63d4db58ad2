#include "seki/harness/diagnostics.hpp"

#include <cmath>

#include "seki/errors.hpp"
#include "seki/rng.hpp"
#include "seki/stats.hpp"

namespace seki::harness {

double correlation_sampling_stddev(double true_r, int k, int n_trials,
                                   std::uint64_t seed) {
    if (std::abs(true_r) >= 1.0) {
        throw ArgumentError("correlation_sampling_stddev: |true_r| must be < 1");
    }
    if (k < 3) throw ArgumentError("correlation_sampling_stddev: K must be >= 3");
    if (n_trials < 2) throw ArgumentError("correlation_sampling_stddev: need trials");

    const double b = std::sqrt(1.0 - true_r * true_r);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int t = 0; t < n_trials; ++t) {
        auto rng = make_stream(seed, RngPhase::diagnostic, t);
        double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
        for (int i = 0; i < k; ++i) {
            const double z1 = rng.normal();
            const double z2 = rng.normal();
            const double x = z1;
            const double y = true_r * z1 + b * z2;
            sx += x;
            sy += y;
            sxx += x * x;
            syy += y * y;
            sxy += x * y;
        }
        const double n = k;
        const double cov = sxy / n - (sx / n) * (sy / n);
        const double vx = sxx / n - (sx / n) * (sx / n);
        const double vy = syy / n - (sy / n) * (sy / n);
        const double r = cov / std::sqrt(vx * vy);
        sum += r;
        sum_sq += r * r;
    }
    const double mean = sum / n_trials;
    const double var = sum_sq / n_trials - mean * mean;
    return std::sqrt(std::max(var, 0.0));
}

SubspaceReport subspace_violation_example(double a) {
    // N = 4, M = 1, K = 3, G(u) = u_1, y = 2, obs variance 7/9.
    Ensemble prev;
    prev.members.resize(4, 3);
    prev.members << 1, 0, 0,
                   -1, 1, 0,
                    0, 1, 0,
                    0, 0, 1;
    prev.iteration_index = 0;

    Eigen::VectorXd y(1);
    y << 2.0;
    Eigen::VectorXd gamma(1);
    gamma << 7.0 / 9.0;
    MeasurementModel m = MeasurementModel::diagonal(y, gamma);

    Eigen::MatrixXd preds = prev.members.row(0);
    SecConfig sec{a > 0.0, a};
    Ensemble next = kalman_update(prev, preds, m, sec, 0,
                                  /*perturb_observations=*/false);

    SubspaceReport report;
    report.residuals = span_residuals(prev, next);
    report.max_residual = report.residuals.maxCoeff();
    return report;
}

SubspaceReport check_subspace_violation(const ExperimentConfig& cfg, double a) {
    ExperimentSetup setup = build_experiment(cfg);
    if (setup.run.ensemble_size >= setup.model->input_dim()) {
        throw ConfigError(
            "check_subspace_violation: needs K < N (span test is vacuous "
            "otherwise)");
    }
    SecConfig sec{a > 0.0, a};
    Ensemble prev = init_ensemble(setup.run);
    Eigen::MatrixXd preds = predict(prev, *setup.model, setup.run.n_threads);
    Ensemble next = kalman_update(prev, preds, *setup.measurement, sec,
                                  setup.run.rng_seed);
    SubspaceReport report;
    report.residuals = span_residuals(prev, next);
    report.max_residual = report.residuals.maxCoeff();
    return report;
}

}  // namespace seki::harness
