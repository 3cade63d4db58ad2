#pragma once

#include <Eigen/Dense>

#include "seki/eki.hpp"

namespace seki::models {

struct BlurSpec {
    int image_height = 0;
    int image_width = 0;
    double sigma_blur = 0.7;  // pixels
};

// Linear blur operator on row-major flattened images: convolution with a
// truncated normalized Gaussian kernel (radius ceil(4 sigma)), reflect-padded
// at the boundary. The kernel sums to 1, so constants are preserved.
class GaussianBlurModel : public ForwardModel {
public:
    explicit GaussianBlurModel(const BlurSpec& spec);
    Eigen::Index input_dim() const override;
    Eigen::Index output_dim() const override;
    Eigen::VectorXd evaluate(const Eigen::VectorXd& u) const override;

    const Eigen::VectorXd& kernel() const { return kernel_; }

private:
    BlurSpec spec_;
    Eigen::VectorXd kernel_;  // 1-D separable kernel, length 2 * radius + 1
    int radius_;
};

}  // namespace seki::models
