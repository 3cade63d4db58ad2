#pragma once

#include <Eigen/Dense>
#include <utility>

namespace seki {

// Power-law sampling error correction settings. exponent_a = 0 (or
// enabled = false) reproduces the uncorrected update exactly.
struct SecConfig {
    bool enabled = false;
    double exponent_a = 0.0;

    bool active() const { return enabled && exponent_a > 0.0; }
};

namespace sec {

// s(r) = |r|^a. Requires |r| <= 1 (upstream clamps) and a >= 0.
double correction_factor(double r, double a);

// Element-wise r -> sgn(r) |r|^{a+1}; sign-preserving shrinkage.
Eigen::MatrixXd correct_correlation_matrix(const Eigen::MatrixXd& r, double a);

// Assembles (C^ug_sec, C^gg_sec) = (V^u R^ug_sec V^g, V^g R^gg_sec V^g)
// from raw covariances and per-component standard deviations. With the
// correction inactive the inputs are returned unchanged. sd_g must be
// consistent with diag(c_gg).
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> corrected_covariances(
    const Eigen::MatrixXd& c_ug, const Eigen::MatrixXd& c_gg,
    const Eigen::VectorXd& sd_u, const Eigen::VectorXd& sd_g,
    const SecConfig& cfg);

}  // namespace sec
}  // namespace seki
