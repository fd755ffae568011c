#include "roadseg/vdisparity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace roadseg {

namespace {
constexpr std::size_t kMaxCells = std::size_t{1} << 28;  // counts memory guard
}

int VDisparityHistogram::bin_index(double d) const {
    const double b = std::floor((d - d_min) / bin_width);
    if (b < 0.0) return 0;
    if (b >= static_cast<double>(bins)) return bins - 1;
    return static_cast<int>(b);
}

std::uint64_t VDisparityHistogram::row_total(int row) const {
    std::uint64_t total = 0;
    for (int b = 0; b < bins; ++b) total += count(row, b);
    return total;
}

VDisparityHistogram build_vdisparity(const DisparityImage& map, double bin_width) {
    if (!(bin_width > 0.0)) {
        throw SizeError("v-disparity bin width must be positive");
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int v = 0; v < map.height(); ++v) {
        for (int u = 0; u < map.width(); ++u) {
            if (!map.is_valid(u, v)) continue;
            const double d = map.at(u, v);
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
    }
    if (!std::isfinite(lo)) {
        throw EmptyInputError("v-disparity histogram needs at least one valid pixel");
    }

    VDisparityHistogram hist;
    hist.rows = map.height();
    hist.bin_width = bin_width;
    hist.d_min = std::floor(lo / bin_width) * bin_width;
    hist.bins = static_cast<int>(std::floor((hi - hist.d_min) / bin_width)) + 1;

    const std::size_t cells = static_cast<std::size_t>(hist.rows) * static_cast<std::size_t>(hist.bins);
    if (cells > kMaxCells) {
        throw SizeError("bin width " + std::to_string(bin_width) + " yields " + std::to_string(hist.bins) +
                        " bins; histogram would be too large");
    }
    hist.counts.assign(cells, 0);

    for (int v = 0; v < map.height(); ++v) {
        auto* row = hist.counts.data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(hist.bins);
        for (int u = 0; u < map.width(); ++u) {
            if (!map.is_valid(u, v)) continue;
            ++row[hist.bin_index(map.at(u, v))];
        }
    }
    return hist;
}

}  // namespace roadseg
