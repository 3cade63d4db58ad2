#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "seki/eki.hpp"

namespace seki::models {

class IdentityModel : public ForwardModel {
public:
    explicit IdentityModel(Eigen::Index n);
    Eigen::Index input_dim() const override { return n_; }
    Eigen::Index output_dim() const override { return n_; }
    Eigen::VectorXd evaluate(const Eigen::VectorXd& u) const override;

private:
    Eigen::Index n_;
};

class LinearModel : public ForwardModel {
public:
    explicit LinearModel(Eigen::MatrixXd a);
    Eigen::Index input_dim() const override { return a_.cols(); }
    Eigen::Index output_dim() const override { return a_.rows(); }
    Eigen::VectorXd evaluate(const Eigen::VectorXd& u) const override;
    const Eigen::MatrixXd& matrix() const { return a_; }

private:
    Eigen::MatrixXd a_;
};

// M x N sensing matrix with i.i.d. standard normal entries, seeded.
Eigen::MatrixXd random_gaussian_matrix(Eigen::Index rows, Eigen::Index cols,
                                       std::uint64_t seed);

}  // namespace seki::models
