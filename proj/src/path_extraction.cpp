#include "roadseg/path_extraction.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>

#include "roadseg/errors.hpp"

namespace roadseg {

OptimalPath extract_path_dp(const VDisparityHistogram& hist, double smoothness) {
    if (hist.rows <= 0 || hist.bins <= 0) {
        throw EmptyInputError("extract_path_dp: histogram has no cells");
    }
    if (!(smoothness >= 0.0)) {
        throw SizeError("extract_path_dp: smoothness must be non-negative");
    }
    const std::uint64_t total =
        std::accumulate(hist.counts.begin(), hist.counts.end(), std::uint64_t{0},
                        [](std::uint64_t acc, std::uint32_t c) { return acc + c; });
    if (total == 0) {
        throw EmptyInputError("extract_path_dp: histogram holds no votes");
    }

    const int rows = hist.rows;
    const int bins = hist.bins;
    const auto cell = [&](int r, int b) {
        return static_cast<std::size_t>(r) * static_cast<std::size_t>(bins) + static_cast<std::size_t>(b);
    };

    std::vector<double> prev(bins), cur(bins), trans(bins);
    std::vector<int> src(bins);
    std::vector<std::int32_t> parent(static_cast<std::size_t>(rows) * static_cast<std::size_t>(bins), -1);

    for (int b = 0; b < bins; ++b) {
        cur[b] = -static_cast<double>(hist.counts[cell(0, b)]);
    }

    for (int r = 1; r < rows; ++r) {
        prev.swap(cur);
        trans = prev;
        std::iota(src.begin(), src.end(), 0);
        // min-plus sweeps: trans[b] = min_b'(prev[b'] + smoothness*|b - b'|)
        for (int b = 1; b < bins; ++b) {
            if (trans[b - 1] + smoothness < trans[b]) {
                trans[b] = trans[b - 1] + smoothness;
                src[b] = src[b - 1];
            }
        }
        for (int b = bins - 2; b >= 0; --b) {
            if (trans[b + 1] + smoothness < trans[b]) {
                trans[b] = trans[b + 1] + smoothness;
                src[b] = src[b + 1];
            }
        }
        auto* parent_row = parent.data() + cell(r, 0);
        for (int b = 0; b < bins; ++b) {
            cur[b] = trans[b] - static_cast<double>(hist.counts[cell(r, b)]);
            parent_row[b] = src[b];
        }
    }

    int best = 0;
    for (int b = 1; b < bins; ++b) {
        if (cur[b] < cur[best]) best = b;
    }

    std::vector<int> path(rows);
    int b = best;
    for (int r = rows - 1; r >= 0; --r) {
        path[r] = b;
        if (r > 0) b = parent[cell(r, b)];
    }

    OptimalPath result;
    result.energy = cur[best];
    result.entries.reserve(rows);
    for (int r = 0; r < rows; ++r) {
        if (hist.row_total(r) == 0) continue;  // no evidence in this row
        result.entries.push_back({r, hist.bin_center(path[r])});
    }
    return result;
}

}  // namespace roadseg
