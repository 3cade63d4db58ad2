#include "seki/sec.hpp"

#include <cmath>
#include <string>

#include "seki/errors.hpp"
#include "seki/stats.hpp"

namespace seki::sec {

double correction_factor(double r, double a) {
    if (a < 0.0) {
        throw ArgumentError("correction_factor: exponent must be nonnegative");
    }
    const double m = std::abs(r);
    if (m > 1.0 + 1e-9) {
        throw ArgumentError("correction_factor: |r| = " + std::to_string(m) +
                            " exceeds 1");
    }
    if (a == 0.0) return 1.0;
    return std::pow(std::min(m, 1.0), a);
}

Eigen::MatrixXd correct_correlation_matrix(const Eigen::MatrixXd& r, double a) {
    Eigen::MatrixXd out(r.rows(), r.cols());
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
        for (Eigen::Index i = 0; i < r.rows(); ++i) {
            const double v = r(i, j);
            out(i, j) = correction_factor(v, a) * v;
        }
    }
    return out;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> corrected_covariances(
    const Eigen::MatrixXd& c_ug, const Eigen::MatrixXd& c_gg,
    const Eigen::VectorXd& sd_u, const Eigen::VectorXd& sd_g,
    const SecConfig& cfg) {
    if (!cfg.active()) {
        return {c_ug, c_gg};
    }
    if (sd_u.size() != c_ug.rows() || sd_g.size() != c_ug.cols() ||
        c_gg.rows() != sd_g.size() || c_gg.cols() != sd_g.size()) {
        throw StructuralError("corrected_covariances: dimension mismatch");
    }
    for (Eigen::Index i = 0; i < sd_g.size(); ++i) {
        const double var = sd_g(i) * sd_g(i);
        const double ref = std::max(std::abs(c_gg(i, i)), 1e-300);
        if (std::abs(var - c_gg(i, i)) > 1e-10 * ref) {
            throw ArgumentError(
                "corrected_covariances: sd_g inconsistent with diag(c_gg) at "
                "component " + std::to_string(i));
        }
    }

    const double a = cfg.exponent_a;
    auto d_ug = stats::corr_decompose(c_ug, sd_u, sd_g);
    auto d_gg = stats::corr_decompose(c_gg, sd_g, sd_g);
    Eigen::MatrixXd r_ug = correct_correlation_matrix(d_ug.r, a);
    Eigen::MatrixXd r_gg = correct_correlation_matrix(d_gg.r, a);

    Eigen::MatrixXd c_ug_sec(c_ug.rows(), c_ug.cols());
    for (Eigen::Index j = 0; j < c_ug.cols(); ++j) {
        for (Eigen::Index i = 0; i < c_ug.rows(); ++i) {
            c_ug_sec(i, j) = (sd_u(i) * sd_g(j)) * r_ug(i, j);
        }
    }
    // r_gg is symmetric exactly (symmetric input, commutative scaling), so the
    // reassembled matrix is symmetric by construction.
    Eigen::MatrixXd c_gg_sec(c_gg.rows(), c_gg.cols());
    for (Eigen::Index j = 0; j < c_gg.cols(); ++j) {
        for (Eigen::Index i = 0; i < c_gg.rows(); ++i) {
            c_gg_sec(i, j) = (sd_g(i) * sd_g(j)) * r_gg(i, j);
        }
    }
    return {std::move(c_ug_sec), std::move(c_gg_sec)};
}

}  // namespace seki::sec
