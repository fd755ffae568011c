#pragma once

#include <cstdint>
#include <vector>

#include "roadseg/disparity_image.hpp"

namespace roadseg {

/// Per-row histogram of disparity votes: row v of the image votes into
/// quantized disparity bins. The substrate for dynamic-programming path
/// extraction and for diagnostic dumps.
struct VDisparityHistogram {
    int rows = 0;
    int bins = 0;
    double bin_width = 1.0;
    double d_min = 0.0;  // lower edge of bin 0
    std::vector<std::uint32_t> counts;  // rows x bins, row-major

    std::uint32_t count(int row, int bin) const {
        return counts[static_cast<std::size_t>(row) * static_cast<std::size_t>(bins) + static_cast<std::size_t>(bin)];
    }

    /// floor((d - d_min)/bin_width), clamped into [0, bins).
    int bin_index(double d) const;

    double bin_center(int bin) const { return d_min + (static_cast<double>(bin) + 0.5) * bin_width; }

    std::uint64_t row_total(int row) const;
};

/// Histograms every valid pixel of the map by row. d_min is the minimum valid
/// disparity floored to a bin boundary; out-of-range votes clamp to the edge
/// bins so row totals always equal the row's valid-pixel count.
VDisparityHistogram build_vdisparity(const DisparityImage& map, double bin_width = 1.0);

}  // namespace roadseg
