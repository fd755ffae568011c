#pragma once

#include <string>

#include "roadseg/disparity_image.hpp"
#include "roadseg/path_extraction.hpp"
#include "roadseg/ransac.hpp"
#include "roadseg/roll_estimation.hpp"
#include "roadseg/transform.hpp"
#include "roadseg/vdisparity.hpp"

namespace roadseg {

struct PipelineConfig {
    GssConfig gss;
    double bin_width = 1.0;
    double smoothness = 1.0;
    RansacConfig ransac;
    double delta = 30.0;
    int otsu_bins = 256;
    bool one_sided_segmentation = false;  // comparison mode, see segment_road_one_sided
};

struct StageTimings {
    double estimate_roll_ms = 0.0;
    double rotate_ms = 0.0;
    double vdisparity_ms = 0.0;
    double path_ms = 0.0;
    double ransac_ms = 0.0;
    double transform_ms = 0.0;
    double segment_ms = 0.0;
    double total_ms = 0.0;
};

struct PipelineResult {
    RollEstimate roll;
    OptimalPath path;
    RansacResult ransac;
    QuadraticRoadModel road_model;  // profile in rotated-frame absolute rows, as used by the transform
    double threshold = 0.0;         // Otsu residual cut
    DisparityImage transformed{1, 1};
    SegmentationMask mask;
    StageTimings timings;
};

/// Full segmentation chain: estimate roll, rotate the map, histogram it,
/// extract the optimal path, fit the road profile robustly, flatten road
/// disparities and threshold. Errors from any stage carry a stage name.
PipelineResult run_segment_pipeline(const DisparityImage& input, const PipelineConfig& cfg = {});

/// JSON report for a pipeline run (schema 1). Excludes bulky rasters.
std::string pipeline_report_json(const PipelineResult& result, const PipelineConfig& cfg,
                                 const std::string& input_name, int width, int height,
                                 std::size_t valid_pixels);

}  // namespace roadseg
