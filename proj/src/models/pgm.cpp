#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "seki/errors.hpp"
#include "seki/models/image.hpp"

namespace seki::models {

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::streamoff offset,
                             const std::string& what) {
    throw IoError("load_pgm: " + path + ": " + what + " (byte offset " +
                  std::to_string(offset) + ")");
}

// Skips whitespace and '#' comment lines, then reads one unsigned integer.
int read_header_int(std::istream& in, const std::string& path) {
    int c;
    while ((c = in.peek()) != EOF) {
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    int value;
    if (!(in >> value) || value < 0) {
        parse_fail(path, in.tellg(), "expected nonnegative integer in header");
    }
    return value;
}

}  // namespace

ImageBuffer load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("load_pgm: cannot open " + path);

    char magic[2] = {0, 0};
    in.read(magic, 2);
    const bool ascii = magic[0] == 'P' && magic[1] == '2';
    const bool binary = magic[0] == 'P' && magic[1] == '5';
    if (!ascii && !binary) {
        parse_fail(path, 0, "not a P2/P5 PGM file");
    }

    const int width = read_header_int(in, path);
    const int height = read_header_int(in, path);
    const int maxval = read_header_int(in, path);
    if (width < 1 || height < 1 || maxval < 1 || maxval > 65535) {
        parse_fail(path, in.tellg(), "invalid dimensions or maxval");
    }

    ImageBuffer img;
    img.height = height;
    img.width = width;
    img.pixels.resize(static_cast<Eigen::Index>(height) * width);

    const Eigen::Index count = img.pixels.size();
    if (ascii) {
        for (Eigen::Index i = 0; i < count; ++i) {
            int v;
            if (!(in >> v) || v < 0 || v > maxval) {
                parse_fail(path, in.tellg(), "bad ascii pixel value");
            }
            img.pixels(i) = static_cast<double>(v) / maxval;
        }
    } else {
        in.get();  // single whitespace after maxval
        const int bytes_per = maxval > 255 ? 2 : 1;
        std::vector<unsigned char> raw(static_cast<size_t>(count) * bytes_per);
        in.read(reinterpret_cast<char*>(raw.data()),
                static_cast<std::streamsize>(raw.size()));
        if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
            parse_fail(path, in.tellg(), "truncated pixel payload");
        }
        for (Eigen::Index i = 0; i < count; ++i) {
            int v = bytes_per == 1
                        ? raw[static_cast<size_t>(i)]
                        : (raw[2 * static_cast<size_t>(i)] << 8) |
                              raw[2 * static_cast<size_t>(i) + 1];
            img.pixels(i) = static_cast<double>(v) / maxval;
        }
    }
    return img;
}

void save_pgm(const ImageBuffer& img, const std::string& path) {
    if (img.pixels.size() !=
        static_cast<Eigen::Index>(img.height) * img.width) {
        throw StructuralError("save_pgm: pixel buffer does not match dimensions");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("save_pgm: cannot open " + path);
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    for (Eigen::Index i = 0; i < img.pixels.size(); ++i) {
        const double clamped = std::clamp(img.pixels(i), 0.0, 1.0);
        out.put(static_cast<char>(std::lround(clamped * 255.0)));
    }
    if (!out) throw IoError("save_pgm: write failed for " + path);
}

}  // namespace seki::models
