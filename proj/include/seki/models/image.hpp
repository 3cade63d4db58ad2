#pragma once

#include <Eigen/Dense>
#include <string>

namespace seki::models {

// Grayscale image, intensities in [0, 1]. Flattening is row-major:
// flat index = row * width + col; flatten/unflatten are exact inverses.
struct ImageBuffer {
    int height = 0;
    int width = 0;
    Eigen::VectorXd pixels;  // size height * width, row-major

    double& at(int row, int col) { return pixels(row * width + col); }
    double at(int row, int col) const { return pixels(row * width + col); }
};

// PGM (P2 ascii / P5 binary) reader; maxval <= 65535, intensities scaled to
// [0, 1]. Throws IoError with the byte offset on malformed input.
ImageBuffer load_pgm(const std::string& path);

// Writes binary P5 at maxval 255.
void save_pgm(const ImageBuffer& img, const std::string& path);

}  // namespace seki::models
