#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "seki/harness/experiment.hpp"

namespace seki::harness {

// Monte-Carlo standard deviation of the sample correlation of K draws from a
// bivariate normal with true correlation true_r.
double correlation_sampling_stddev(double true_r, int k, int n_trials,
                                   std::uint64_t seed);

struct SubspaceReport {
    Eigen::VectorXd residuals;  // relative projection residual per member
    double max_residual = 0.0;
    bool violated(double tol = 0.01) const { return max_residual > tol; }
};

// One SEC update of the built-in 4-dimensional worked example (K = 3,
// G(u) = u_1, y = 2, obs variance 7/9), then per-member span residuals.
SubspaceReport subspace_violation_example(double a);

// Same check on a configured experiment: one update from the initial
// ensemble with correction exponent a.
SubspaceReport check_subspace_violation(const ExperimentConfig& cfg, double a);

}  // namespace seki::harness
