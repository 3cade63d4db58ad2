#include "seki/models/linear.hpp"

#include <string>

#include "seki/errors.hpp"
#include "seki/rng.hpp"

namespace seki::models {

IdentityModel::IdentityModel(Eigen::Index n) : n_(n) {
    if (n < 1) throw StructuralError("IdentityModel: dimension must be >= 1");
}

Eigen::VectorXd IdentityModel::evaluate(const Eigen::VectorXd& u) const {
    if (u.size() != n_) throw StructuralError("IdentityModel: dimension mismatch");
    return u;
}

LinearModel::LinearModel(Eigen::MatrixXd a) : a_(std::move(a)) {
    if (a_.rows() < 1 || a_.cols() < 1) {
        throw StructuralError("LinearModel: empty matrix");
    }
}

Eigen::VectorXd LinearModel::evaluate(const Eigen::VectorXd& u) const {
    if (u.size() != a_.cols()) {
        throw StructuralError("LinearModel: expected dimension " +
                              std::to_string(a_.cols()) + ", got " +
                              std::to_string(u.size()));
    }
    return a_ * u;
}

Eigen::MatrixXd random_gaussian_matrix(Eigen::Index rows, Eigen::Index cols,
                                       std::uint64_t seed) {
    Eigen::MatrixXd a(rows, cols);
    auto rng = make_stream(seed, RngPhase::sensing_matrix);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            a(i, j) = rng.normal();
        }
    }
    return a;
}

}  // namespace seki::models
