#include "seki/stats.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <string>

#include "seki/errors.hpp"

namespace seki::stats {

namespace {

void require_samples(const Eigen::MatrixXd& s, const char* name) {
    if (s.cols() < 2) {
        throw StructuralError(std::string(name) +
                              ": need at least 2 members, got " +
                              std::to_string(s.cols()));
    }
}

}  // namespace

Eigen::VectorXd sample_mean(const Eigen::MatrixXd& samples) {
    require_samples(samples, "sample_mean");
    return samples.rowwise().mean();
}

Eigen::MatrixXd cross_covariance(const Eigen::MatrixXd& u, const Eigen::MatrixXd& g) {
    require_samples(u, "cross_covariance");
    require_samples(g, "cross_covariance");
    if (u.cols() != g.cols()) {
        throw StructuralError("cross_covariance: member count mismatch (" +
                              std::to_string(u.cols()) + " vs " +
                              std::to_string(g.cols()) + ")");
    }
    const double k = static_cast<double>(u.cols());
    Eigen::MatrixXd uc = u.colwise() - u.rowwise().mean().eval();
    Eigen::MatrixXd gc = g.colwise() - g.rowwise().mean().eval();
    return (uc * gc.transpose()) / k;
}

Eigen::MatrixXd auto_covariance(const Eigen::MatrixXd& g) {
    require_samples(g, "auto_covariance");
    const double k = static_cast<double>(g.cols());
    Eigen::MatrixXd gc = g.colwise() - g.rowwise().mean().eval();
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(g.rows(), g.rows());
    c.selfadjointView<Eigen::Lower>().rankUpdate(gc, 1.0 / k);
    c.triangularView<Eigen::StrictlyUpper>() = c.transpose();
    return c;
}

Eigen::VectorXd component_stddev(const Eigen::MatrixXd& samples) {
    require_samples(samples, "component_stddev");
    const double k = static_cast<double>(samples.cols());
    Eigen::MatrixXd c = samples.colwise() - samples.rowwise().mean().eval();
    return (c.array().square().rowwise().sum() / k).sqrt();
}

CovarianceDecomposition corr_decompose(const Eigen::MatrixXd& c,
                                       const Eigen::VectorXd& sd_left,
                                       const Eigen::VectorXd& sd_right) {
    if (sd_left.size() != c.rows() || sd_right.size() != c.cols()) {
        throw StructuralError("corr_decompose: dimension mismatch");
    }
    if ((sd_left.array() < 0).any() || (sd_right.array() < 0).any()) {
        throw ArgumentError("corr_decompose: negative standard deviation");
    }
    CovarianceDecomposition d;
    d.sd_left = sd_left;
    d.sd_right = sd_right;
    d.r.resize(c.rows(), c.cols());
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
        const double sj = sd_right(j);
        for (Eigen::Index i = 0; i < c.rows(); ++i) {
            const double si = sd_left(i);
            if (si == 0.0 || sj == 0.0) {
                // Degenerate component: correlation undefined, use 0 so the
                // update takes no influence from it.
                d.r(i, j) = 0.0;
            } else {
                d.r(i, j) = std::clamp(c(i, j) / (si * sj), -1.0, 1.0);
            }
        }
    }
    return d;
}

Eigen::MatrixXd spd_solve(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != a.cols() || a.rows() != b.rows()) {
        throw StructuralError("spd_solve: dimension mismatch");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) {
        // Re-run an unblocked factorization to locate the failing pivot;
        // this path is only taken on failure.
        Eigen::Index pivot = a.rows() - 1;
        Eigen::MatrixXd l = Eigen::MatrixXd::Zero(a.rows(), a.cols());
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            double diag = a(j, j) - l.row(j).head(j).squaredNorm();
            if (!(diag > 0.0) || !std::isfinite(diag)) {
                pivot = j;
                break;
            }
            l(j, j) = std::sqrt(diag);
            for (Eigen::Index i = j + 1; i < a.rows(); ++i) {
                l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
            }
        }
        throw NumericalError("spd_solve: Cholesky factorization failed at pivot " +
                             std::to_string(pivot));
    }
    return llt.solve(b);
}

}  // namespace seki::stats
