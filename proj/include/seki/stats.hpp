#pragma once

#include <Eigen/Dense>

namespace seki::stats {

// A sample set is stored column-wise: D rows (component dimension), K columns
// (members). All kernels use the 1/K covariance normalization.

// Arithmetic mean over members. Throws StructuralError if K < 2.
Eigen::VectorXd sample_mean(const Eigen::MatrixXd& samples);

// (1/K) sum_k (u_k - u_mean) (g_k - g_mean)^T. Throws StructuralError on
// member-count mismatch.
Eigen::MatrixXd cross_covariance(const Eigen::MatrixXd& u, const Eigen::MatrixXd& g);

// Symmetric PSD auto-covariance, equal to cross_covariance(g, g) but
// symmetric by construction.
Eigen::MatrixXd auto_covariance(const Eigen::MatrixXd& g);

// Per-component standard deviations (sqrt of the 1/K variances).
Eigen::VectorXd component_stddev(const Eigen::MatrixXd& samples);

// Correlation decomposition C = V_left R V_right with V_* diagonal matrices
// of standard deviations (stored as vectors).
struct CovarianceDecomposition {
    Eigen::VectorXd sd_left;
    Eigen::VectorXd sd_right;
    Eigen::MatrixXd r;  // entries clamped to [-1, 1]; 0 where either sd is 0
};

CovarianceDecomposition corr_decompose(const Eigen::MatrixXd& c,
                                       const Eigen::VectorXd& sd_left,
                                       const Eigen::VectorXd& sd_right);

// Solves a X = b for symmetric positive definite a via Cholesky; never forms
// an explicit inverse. Throws NumericalError naming the failing pivot.
Eigen::MatrixXd spd_solve(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace seki::stats
