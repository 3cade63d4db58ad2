#include "seki/models/blur.hpp"

#include <cmath>
#include <string>

#include "seki/errors.hpp"

namespace seki::models {

namespace {

// Reflect index into [0, n): ... 2 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
int reflect(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - i - 1;
    }
    return i;
}

}  // namespace

GaussianBlurModel::GaussianBlurModel(const BlurSpec& spec) : spec_(spec) {
    if (spec.image_height < 1 || spec.image_width < 1) {
        throw StructuralError("GaussianBlurModel: invalid image dimensions");
    }
    if (!(spec.sigma_blur > 0.0)) {
        throw ArgumentError("GaussianBlurModel: sigma_blur must be positive");
    }
    radius_ = static_cast<int>(std::ceil(4.0 * spec.sigma_blur));
    kernel_.resize(2 * radius_ + 1);
    for (int i = -radius_; i <= radius_; ++i) {
        kernel_(i + radius_) =
            std::exp(-0.5 * i * i / (spec.sigma_blur * spec.sigma_blur));
    }
    kernel_ /= kernel_.sum();
}

Eigen::Index GaussianBlurModel::input_dim() const {
    return static_cast<Eigen::Index>(spec_.image_height) * spec_.image_width;
}

Eigen::Index GaussianBlurModel::output_dim() const { return input_dim(); }

Eigen::VectorXd GaussianBlurModel::evaluate(const Eigen::VectorXd& u) const {
    if (u.size() != input_dim()) {
        throw StructuralError("GaussianBlurModel: expected " +
                              std::to_string(input_dim()) + " pixels, got " +
                              std::to_string(u.size()));
    }
    const int h = spec_.image_height;
    const int w = spec_.image_width;

    // Separable convolution: rows then columns.
    Eigen::VectorXd tmp(u.size());
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double acc = 0.0;
            for (int i = -radius_; i <= radius_; ++i) {
                acc += kernel_(i + radius_) * u(r * w + reflect(c + i, w));
            }
            tmp(r * w + c) = acc;
        }
    }
    Eigen::VectorXd out(u.size());
    for (int c = 0; c < w; ++c) {
        for (int r = 0; r < h; ++r) {
            double acc = 0.0;
            for (int i = -radius_; i <= radius_; ++i) {
                acc += kernel_(i + radius_) * tmp(reflect(r + i, h) * w + c);
            }
            out(r * w + c) = acc;
        }
    }
    return out;
}

}  // namespace seki::models
