#pragma once

#include <vector>

#include "roadseg/vdisparity.hpp"

namespace roadseg {

struct PathEntry {
    int v = 0;      // histogram row (image row)
    double d = 0.0; // bin centre disparity
};

/// Row-per-row disparity sequence selected from a v-disparity histogram.
struct OptimalPath {
    std::vector<PathEntry> entries;  // rows with at least one vote, strictly increasing v
    double energy = 0.0;             // full objective value over all rows
};

/// Finds the bin assignment b(v) minimizing
///   sum_v [ -counts(v, b(v)) + smoothness * |b(v) - b(v+1)| ]
/// by bottom-up dynamic programming with backtracking. The L1 transition
/// term is evaluated with a two-sweep min-plus pass per row, which keeps the
/// run linear in the number of histogram cells while staying exactly optimal.
/// Rows without any votes participate in the objective but are omitted from
/// the reported entries.
OptimalPath extract_path_dp(const VDisparityHistogram& hist, double smoothness = 1.0);

}  // namespace roadseg
