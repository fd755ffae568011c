#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "roadseg/errors.hpp"

namespace roadseg {

/// Dense disparity raster with an explicit validity mask.
///
/// Row index v grows downward, column index u grows rightward. All coordinate
/// rotations reference the geometric centre ((W-1)/2, (H-1)/2); invalid
/// entries are never read by downstream math.
class DisparityImage {
public:
    DisparityImage(int width, int height);

    int width() const { return width_; }
    int height() const { return height_; }
    double center_u() const { return 0.5 * (width_ - 1); }
    double center_v() const { return 0.5 * (height_ - 1); }

    double at(int u, int v) const { return values_[idx(u, v)]; }
    bool is_valid(int u, int v) const { return valid_[idx(u, v)] != 0; }

    void set(int u, int v, double d) {
        values_[idx(u, v)] = d;
        valid_[idx(u, v)] = 1;
    }
    void set_invalid(int u, int v) {
        values_[idx(u, v)] = 0.0;
        valid_[idx(u, v)] = 0;
    }

    std::size_t valid_count() const;
    std::size_t pixel_count() const { return values_.size(); }

    const std::vector<double>& values() const { return values_; }
    const std::vector<std::uint8_t>& valid() const { return valid_; }

    std::size_t idx(int u, int v) const {
        return static_cast<std::size_t>(v) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(u);
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> values_;
    std::vector<std::uint8_t> valid_;
};

/// Builds an image from a row-major grid. Entries equal to invalid_marker or
/// non-finite are flagged invalid.
DisparityImage new_disparity_image(int width, int height,
                                   const std::vector<double>& values,
                                   double invalid_marker = 0.0);

/// Binary road mask aligned with a source DisparityImage.
struct SegmentationMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> road;  // row-major booleans

    bool is_road(int u, int v) const {
        return road[static_cast<std::size_t>(v) * static_cast<std::size_t>(width) + static_cast<std::size_t>(u)] != 0;
    }
    std::size_t road_count() const;
};

}  // namespace roadseg
