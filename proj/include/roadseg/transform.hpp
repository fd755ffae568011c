#pragma once

#include <span>

#include "roadseg/disparity_image.hpp"
#include "roadseg/road_model.hpp"

namespace roadseg {

/// Applies the disparity transformation to a roll-corrected map: every valid
/// disparity at row v becomes d - model(v) + delta, then the updated map is
/// rotated back by -gamma so the result sits in the original frame. Road
/// pixels end up clustered around delta.
DisparityImage transform_map(const DisparityImage& rotated, const QuadraticRoadModel& model,
                             double gamma, double delta = 30.0);

struct OtsuSplit {
    double threshold = 0.0;               // bin edge value
    double between_class_variance = 0.0;  // w0*w1*(mu0 - mu1)^2 at the edge
    int edge_index = 0;                   // bins below the edge
    int bins = 0;
    double value_min = 0.0;
    double value_max = 0.0;
};

/// Histogram-based Otsu threshold: values are binned into equal-width bins
/// over [min, max] and the bin edge maximizing the between-class variance is
/// returned, ties broken toward the lower edge. Class means use the exact
/// value sums, not bin centres. Throws DegenerateHistogramError when the
/// population is constant.
OtsuSplit otsu_split(std::span<const double> values, int bins = 256);

inline double otsu_threshold(std::span<const double> values, int bins = 256) {
    return otsu_split(values, bins).threshold;
}

struct SegmentationOutcome {
    SegmentationMask mask;
    double threshold = 0.0;               // residual-magnitude cut
    double between_class_variance = 0.0;
};

/// Segments the road from a transformed map by thresholding the residual
/// magnitude |d - delta| with Otsu's method; pixels at or below the threshold
/// are road. Invalid pixels are never road. Thresholding the magnitude keeps
/// "road" the low-residual class no matter whether deviations sit above
/// (obstacles) or below (potholes) the road surface.
SegmentationOutcome segment_road_detailed(const DisparityImage& trf, double delta = 30.0, int bins = 256);

inline SegmentationMask segment_road(const DisparityImage& trf, double delta = 30.0, int bins = 256) {
    return segment_road_detailed(trf, delta, bins).mask;
}

/// Comparison mode: Otsu applied to the raw transformed disparities, one
/// side of the threshold marked road (the side whose class mean lies closer
/// to delta).
SegmentationOutcome segment_road_one_sided(const DisparityImage& trf, double delta = 30.0, int bins = 256);

}  // namespace roadseg
