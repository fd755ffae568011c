#include "roadseg/disparity_image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace roadseg {

DisparityImage::DisparityImage(int width, int height) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
        throw SizeError("disparity image dimensions must be at least 1x1, got " +
                        std::to_string(width) + "x" + std::to_string(height));
    }
    const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    values_.assign(n, 0.0);
    valid_.assign(n, 0);
}

std::size_t DisparityImage::valid_count() const {
    return static_cast<std::size_t>(std::count(valid_.begin(), valid_.end(), std::uint8_t{1}));
}

DisparityImage new_disparity_image(int width, int height,
                                   const std::vector<double>& values,
                                   double invalid_marker) {
    DisparityImage img(width, height);
    const auto expected = img.pixel_count();
    if (values.size() != expected) {
        throw SizeError("value grid has " + std::to_string(values.size()) + " entries, expected " +
                        std::to_string(expected));
    }
    for (int v = 0; v < height; ++v) {
        for (int u = 0; u < width; ++u) {
            const double d = values[img.idx(u, v)];
            if (!std::isfinite(d) || d == invalid_marker) {
                img.set_invalid(u, v);
            } else {
                img.set(u, v, d);
            }
        }
    }
    return img;
}

std::size_t SegmentationMask::road_count() const {
    return static_cast<std::size_t>(std::count(road.begin(), road.end(), std::uint8_t{1}));
}

}  // namespace roadseg
