#include "roadseg/pipeline.hpp"

#include <chrono>
#include <numbers>
#include <utility>

#include <json.hpp>

#include "roadseg/rotation.hpp"

namespace roadseg {

namespace {

class StageClock {
public:
    StageClock() : start_(std::chrono::steady_clock::now()) {}

    double lap_ms() {
        const auto now = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>(now - start_).count();
        start_ = now;
        return ms;
    }

private:
    std::chrono::steady_clock::time_point start_;
};

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (Error& e) {
        e.set_stage(name);
        throw;
    }
}

}  // namespace

PipelineResult run_segment_pipeline(const DisparityImage& input, const PipelineConfig& cfg) {
    PipelineResult result;
    StageClock clock;
    StageClock total;

    result.roll = stage("estimate-roll", [&] { return estimate_roll_gss(input, cfg.gss); });
    result.timings.estimate_roll_ms = clock.lap_ms();

    const DisparityImage rotated =
        stage("rotate", [&] { return rotate_map(input, result.roll.gamma); });
    result.timings.rotate_ms = clock.lap_ms();

    const VDisparityHistogram hist =
        stage("v-disparity", [&] { return build_vdisparity(rotated, cfg.bin_width); });
    result.timings.vdisparity_ms = clock.lap_ms();

    result.path = stage("path-extraction", [&] { return extract_path_dp(hist, cfg.smoothness); });
    result.timings.path_ms = clock.lap_ms();

    result.ransac = stage("ransac", [&] { return ransac_parabola(result.path, cfg.ransac); });
    result.road_model = result.ransac.model;
    result.timings.ransac_ms = clock.lap_ms();

    result.transformed = stage("transform", [&] {
        return transform_map(rotated, result.road_model, result.roll.gamma, cfg.delta);
    });
    result.timings.transform_ms = clock.lap_ms();

    const SegmentationOutcome outcome = stage("segment", [&] {
        return cfg.one_sided_segmentation
                   ? segment_road_one_sided(result.transformed, cfg.delta, cfg.otsu_bins)
                   : segment_road_detailed(result.transformed, cfg.delta, cfg.otsu_bins);
    });
    result.threshold = outcome.threshold;
    result.mask = outcome.mask;
    result.timings.segment_ms = clock.lap_ms();
    result.timings.total_ms = total.lap_ms();
    return result;
}

std::string pipeline_report_json(const PipelineResult& result, const PipelineConfig& cfg,
                                 const std::string& input_name, int width, int height,
                                 std::size_t valid_pixels) {
    nlohmann::json j;
    j["schema"] = 1;
    j["input"] = {{"path", input_name}, {"width", width}, {"height", height},
                  {"valid_pixels", valid_pixels}};
    j["roll"] = {{"gamma_rad", result.roll.gamma},
                 {"gamma_deg", result.roll.gamma * 180.0 / std::numbers::pi},
                 {"e_min", result.roll.e_min},
                 {"evaluations", result.roll.evaluations},
                 {"bracket_shrinks", result.roll.bracket_shrinks},
                 {"flat_objective", result.roll.flat_objective}};
    j["road_model"] = {{"alpha0", result.road_model.a0},
                       {"alpha1", result.road_model.a1},
                       {"alpha2", result.road_model.a2}};
    j["ransac"] = {{"eta", result.ransac.eta},
                   {"inliers", result.ransac.inliers},
                   {"path_entries", result.path.entries.size()},
                   {"refinement_iterations", result.ransac.refinement_iterations},
                   {"converged", result.ransac.converged}};
    j["segmentation"] = {{"delta", cfg.delta},
                         {"threshold", result.threshold},
                         {"otsu_bins", cfg.otsu_bins},
                         {"one_sided", cfg.one_sided_segmentation},
                         {"road_pixels", result.mask.road_count()}};
    j["config"] = {{"bin_width", cfg.bin_width},
                   {"smoothness", cfg.smoothness},
                   {"gss_tol", cfg.gss.tol},
                   {"gss_k", cfg.gss.k},
                   {"coarse_scan_steps", cfg.gss.coarse_scan_steps},
                   {"ransac_iterations", cfg.ransac.iterations},
                   {"ransac_sample_size", cfg.ransac.sample_size},
                   {"inlier_tol", cfg.ransac.inlier_tol}};
    j["timings_ms"] = {{"estimate_roll", result.timings.estimate_roll_ms},
                       {"rotate", result.timings.rotate_ms},
                       {"vdisparity", result.timings.vdisparity_ms},
                       {"path", result.timings.path_ms},
                       {"ransac", result.timings.ransac_ms},
                       {"transform", result.timings.transform_ms},
                       {"segment", result.timings.segment_ms},
                       {"total", result.timings.total_ms}};
    return j.dump(2);
}

}  // namespace roadseg
