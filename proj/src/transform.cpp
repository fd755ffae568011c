#include "roadseg/transform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "roadseg/rotation.hpp"

namespace roadseg {

DisparityImage transform_map(const DisparityImage& rotated, const QuadraticRoadModel& model,
                             double gamma, double delta) {
    DisparityImage updated = rotated;
    for (int v = 0; v < updated.height(); ++v) {
        const double fitted = model(static_cast<double>(v));
        for (int u = 0; u < updated.width(); ++u) {
            if (!updated.is_valid(u, v)) continue;
            updated.set(u, v, updated.at(u, v) - fitted + delta);
        }
    }
    return rotate_map(updated, -gamma);
}

OtsuSplit otsu_split(std::span<const double> values, int bins) {
    if (bins < 2) {
        throw SizeError("otsu_split: need at least 2 bins");
    }
    if (values.size() < 2) {
        throw DegenerateHistogramError("otsu_split: need at least 2 values");
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double x : values) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    if (!(hi > lo)) {
        throw DegenerateHistogramError("otsu_split: population is constant, nothing to split");
    }

    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<std::uint64_t> count(static_cast<std::size_t>(bins), 0);
    std::vector<double> sum(static_cast<std::size_t>(bins), 0.0);
    for (double x : values) {
        int b = static_cast<int>((x - lo) / width);
        b = std::clamp(b, 0, bins - 1);
        ++count[static_cast<std::size_t>(b)];
        sum[static_cast<std::size_t>(b)] += x;
    }

    const double total_n = static_cast<double>(values.size());
    double total_sum = 0.0;
    for (double s : sum) total_sum += s;

    OtsuSplit best;
    best.bins = bins;
    best.value_min = lo;
    best.value_max = hi;
    best.edge_index = -1;
    best.between_class_variance = -1.0;

    double left_n = 0.0;
    double left_sum = 0.0;
    for (int e = 1; e < bins; ++e) {
        left_n += static_cast<double>(count[static_cast<std::size_t>(e - 1)]);
        left_sum += sum[static_cast<std::size_t>(e - 1)];
        const double right_n = total_n - left_n;
        if (left_n == 0.0 || right_n == 0.0) continue;
        const double mu0 = left_sum / left_n;
        const double mu1 = (total_sum - left_sum) / right_n;
        const double variance = (left_n / total_n) * (right_n / total_n) * (mu0 - mu1) * (mu0 - mu1);
        if (variance > best.between_class_variance) {
            best.between_class_variance = variance;
            best.edge_index = e;
        }
    }
    if (best.edge_index < 0) {
        // all mass in one bin despite distinct values (possible only through
        // pathological rounding); treat as unsplittable
        throw DegenerateHistogramError("otsu_split: no usable split edge");
    }
    best.threshold = lo + static_cast<double>(best.edge_index) * width;
    return best;
}

namespace {

SegmentationOutcome make_outcome(const DisparityImage& trf, const OtsuSplit& split,
                                 bool (*is_road)(double value, double delta, double threshold),
                                 double delta) {
    SegmentationOutcome out;
    out.threshold = split.threshold;
    out.between_class_variance = split.between_class_variance;
    out.mask.width = trf.width();
    out.mask.height = trf.height();
    out.mask.road.assign(trf.pixel_count(), 0);
    for (int v = 0; v < trf.height(); ++v) {
        for (int u = 0; u < trf.width(); ++u) {
            if (!trf.is_valid(u, v)) continue;
            if (is_road(trf.at(u, v), delta, split.threshold)) {
                out.mask.road[trf.idx(u, v)] = 1;
            }
        }
    }
    return out;
}

}  // namespace

SegmentationOutcome segment_road_detailed(const DisparityImage& trf, double delta, int bins) {
    std::vector<double> residuals;
    residuals.reserve(trf.valid_count());
    for (int v = 0; v < trf.height(); ++v) {
        for (int u = 0; u < trf.width(); ++u) {
            if (trf.is_valid(u, v)) residuals.push_back(std::abs(trf.at(u, v) - delta));
        }
    }
    if (residuals.empty()) {
        throw EmptyInputError("segment_road: map has no valid pixels");
    }
    const OtsuSplit split = otsu_split(residuals, bins);
    return make_outcome(
        trf, split,
        [](double value, double d, double thr) { return std::abs(value - d) <= thr; }, delta);
}

SegmentationOutcome segment_road_one_sided(const DisparityImage& trf, double delta, int bins) {
    std::vector<double> vals;
    vals.reserve(trf.valid_count());
    for (int v = 0; v < trf.height(); ++v) {
        for (int u = 0; u < trf.width(); ++u) {
            if (trf.is_valid(u, v)) vals.push_back(trf.at(u, v));
        }
    }
    if (vals.empty()) {
        throw EmptyInputError("segment_road: map has no valid pixels");
    }
    const OtsuSplit split = otsu_split(vals, bins);

    // Decide which side of the cut is road: the class whose mean sits closer
    // to the expected road level delta.
    double lo_sum = 0.0, hi_sum = 0.0;
    std::size_t lo_n = 0, hi_n = 0;
    for (double x : vals) {
        if (x < split.threshold) {
            lo_sum += x;
            ++lo_n;
        } else {
            hi_sum += x;
            ++hi_n;
        }
    }
    const double lo_mu = lo_n ? lo_sum / static_cast<double>(lo_n) : std::numeric_limits<double>::infinity();
    const double hi_mu = hi_n ? hi_sum / static_cast<double>(hi_n) : std::numeric_limits<double>::infinity();
    const bool road_is_low = std::abs(lo_mu - delta) <= std::abs(hi_mu - delta);

    if (road_is_low) {
        return make_outcome(
            trf, split, [](double value, double, double thr) { return value < thr; }, delta);
    }
    return make_outcome(
        trf, split, [](double value, double, double thr) { return value >= thr; }, delta);
}

}  // namespace roadseg
