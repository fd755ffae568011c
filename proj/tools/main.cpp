// roadseg command-line front end: synthetic data generation, roll estimation,
// full segmentation runs and accuracy sweeps over disparity rasters.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "roadseg/errors.hpp"
#include "roadseg/pipeline.hpp"
#include "roadseg/raster_io.hpp"
#include "roadseg/rotation.hpp"
#include "roadseg/synthetic.hpp"

namespace {

using namespace roadseg;

constexpr double kPi = std::numbers::pi;

struct CommonIoFlags {
    RasterOptions raster;

    void attach(CLI::App* cmd) {
        cmd->add_option("--invalid-marker", raster.invalid_marker,
                        "PFM/CSV value treated as invalid (non-finite always is)")
            ->capture_default_str();
        cmd->add_option("--pgm-scale", raster.pgm_scale,
                        "PGM divisor: disparity = raw / scale")
            ->capture_default_str();
    }
};

struct GssFlags {
    GssConfig gss;

    void attach(CLI::App* cmd) {
        cmd->add_option("--tol", gss.tol, "GSS termination bracket width (rad)")
            ->capture_default_str();
        cmd->add_option("--gss-k", gss.k, "golden section factor")->capture_default_str();
        cmd->add_option("--gamma-lo", gss.gamma_lo, "search bracket lower end (rad)")
            ->capture_default_str();
        cmd->add_option("--gamma-hi", gss.gamma_hi, "search bracket upper end (rad)")
            ->capture_default_str();
        cmd->add_option("--coarse-scan-steps", gss.coarse_scan_steps,
                        "pre-scan grid size bracketing the global minimum (0 = bare GSS)")
            ->capture_default_str();
    }
};

InsetRegion parse_inset(const std::string& text) {
    InsetRegion r;
    if (std::sscanf(text.c_str(), "%d,%d,%d,%d,%lf", &r.u0, &r.v0, &r.u1, &r.v1, &r.offset) != 5) {
        throw CLI::ValidationError("--inset expects u0,v0,u1,v1,offset");
    }
    return r;
}

int run_synth(const SyntheticSpec& spec, const std::string& out_path,
              const std::string& labels_path, const CommonIoFlags& io) {
    DisparityImage map = generate_ground_truth(spec);
    if (spec.kappa > 0.0) {
        map = add_noise(map, spec.kappa, spec.seed);
    }
    write_disparity(out_path, map, io.raster);
    if (!labels_path.empty()) {
        write_mask_png(labels_path, ground_truth_labels(spec));
    }
    std::cout << "wrote " << out_path << " (" << map.width() << "x" << map.height() << ", "
              << map.valid_count() << " valid pixels)\n";
    return 0;
}

int run_estimate_roll(const std::string& input, const GssFlags& gss, const CommonIoFlags& io,
                      const std::string& report_path, const std::string& curve_path,
                      double curve_step) {
    const DisparityImage map = read_disparity(input, io.raster);
    const RollEstimate est = estimate_roll_gss(map, gss.gss);

    nlohmann::json j;
    j["schema"] = 1;
    j["input"] = input;
    j["gamma_rad"] = est.gamma;
    j["gamma_deg"] = est.gamma * 180.0 / kPi;
    j["e_min"] = est.e_min;
    j["evaluations"] = est.evaluations;
    j["bracket_shrinks"] = est.bracket_shrinks;
    j["flat_objective"] = est.flat_objective;
    const QuadraticRoadModel abs_model = est.model.shift_argument(-map.center_v());
    j["road_model"] = {{"alpha0", abs_model.a0}, {"alpha1", abs_model.a1}, {"alpha2", abs_model.a2}};

    const std::string text = j.dump(2);
    if (report_path.empty()) {
        std::cout << text << '\n';
    } else {
        write_text_atomic(report_path, text);
        std::cout << "wrote " << report_path << '\n';
    }

    if (!curve_path.empty()) {
        write_text_atomic(curve_path, curve_to_csv(scan_energy_curve(map, curve_step)));
        std::cout << "wrote " << curve_path << '\n';
    }
    return 0;
}

int run_segment(const std::string& input, const std::string& prefix, const PipelineConfig& cfg,
                const CommonIoFlags& io, bool strict_mode, bool dump_vdisparity) {
    const DisparityImage map = read_disparity(input, io.raster);
    const PipelineResult result = run_segment_pipeline(map, cfg);

    const std::string ext = std::filesystem::path(input).extension().string();
    write_disparity(prefix + "_trf" + ext, result.transformed, io.raster);
    write_mask_png(prefix + "_mask.png", result.mask);
    write_text_atomic(prefix + "_mask.json", mask_to_rle_json(result.mask));
    write_overlay_png(prefix + "_overlay.png", result.transformed, result.mask);
    write_text_atomic(prefix + "_path.csv", path_to_csv(result.path));
    if (dump_vdisparity) {
        const DisparityImage rotated = rotate_map(map, result.roll.gamma);
        const VDisparityHistogram hist = build_vdisparity(rotated, cfg.bin_width);
        write_vdisparity_png(prefix + "_vdisparity.png", hist);
        write_text_atomic(prefix + "_vdisparity.csv", vdisparity_to_csv(hist));
    }
    write_text_atomic(prefix + "_report.json",
                      pipeline_report_json(result, cfg, input, map.width(), map.height(),
                                           map.valid_count()));

    std::cout << "gamma = " << result.roll.gamma << " rad ("
              << result.roll.gamma * 180.0 / kPi << " deg), e_min = " << result.roll.e_min
              << ", road pixels = " << result.mask.road_count() << '\n'
              << "wrote " << prefix << "_{report.json,mask.png,mask.json,overlay.png,path.csv,trf"
              << ext << "}\n";

    if (strict_mode && !result.ransac.converged) {
        std::cerr << "ransac refinement did not converge (strict mode)\n";
        return 4;
    }
    return 0;
}

int run_eval(const SyntheticSpec& base, int angle_count, double lo, double hi,
             const GssFlags& gss, const std::string& report_path, const std::string& csv_path) {
    const std::vector<double> angles = uniform_angles(lo, hi, angle_count);
    const SweepReport report = run_accuracy_sweep(base, angles, gss.gss);
    write_text_atomic(report_path, sweep_to_json(report));
    std::cout << "wrote " << report_path << '\n';
    if (!csv_path.empty()) {
        write_text_atomic(csv_path, sweep_to_csv(report));
        std::cout << "wrote " << csv_path << '\n';
    }
    std::cout << "mean error = " << report.mean_error * 180.0 / kPi << " deg, max error = "
              << report.max_error * 180.0 / kPi << " deg, failures = " << report.failures << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"disparity transformation road segmentation"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "TOML-style config file with one section per subcommand; flags win");

    // --- synth --------------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "generate a synthetic ground-truth disparity map");
    synth->fallthrough();
    SyntheticSpec spec;
    std::string synth_out;
    std::string labels_path;
    std::vector<std::string> inset_args;
    CommonIoFlags synth_io;
    synth->add_option("-o,--output", synth_out, "output raster (.pfm/.pgm/.csv)")->required();
    synth->add_option("--width", spec.width)->capture_default_str();
    synth->add_option("--height", spec.height)->capture_default_str();
    synth->add_option("--a0", spec.model.a0, "road profile constant term")->capture_default_str();
    synth->add_option("--a1", spec.model.a1, "road profile linear term")->capture_default_str();
    synth->add_option("--a2", spec.model.a2, "road profile quadratic term")->capture_default_str();
    synth->add_option("--gamma", spec.gamma, "roll angle of the generated map (rad)")
        ->capture_default_str();
    synth->add_option("--kappa", spec.kappa, "uniform noise amplitude")->capture_default_str();
    synth->add_option("--seed", spec.seed)->capture_default_str();
    synth->add_option("--quantize", spec.quantize_step, "round disparities to this step (0 = exact)")
        ->capture_default_str();
    synth->add_option("--inset", inset_args,
                      "pothole/obstacle region u0,v0,u1,v1,offset (repeatable)");
    synth->add_option("--labels-png", labels_path, "also write the road label mask");
    synth_io.attach(synth);

    // --- estimate-roll -------------------------------------------------------
    auto* roll = app.add_subcommand("estimate-roll", "estimate the stereo-rig roll angle");
    roll->fallthrough();
    std::string roll_input, roll_report, curve_path;
    double curve_step = kPi / 180.0;
    GssFlags roll_gss;
    CommonIoFlags roll_io;
    roll->add_option("input", roll_input, "disparity raster")->required();
    roll->add_option("--report", roll_report, "write the JSON report here instead of stdout");
    roll->add_option("--curve", curve_path, "dump the energy curve as CSV");
    roll->add_option("--curve-step", curve_step, "energy curve sampling step (rad)")
        ->capture_default_str();
    roll_gss.attach(roll);
    roll_io.attach(roll);

    // --- segment --------------------------------------------------------------
    auto* segment = app.add_subcommand("segment", "run the full road segmentation pipeline");
    segment->fallthrough();
    std::string seg_input, seg_prefix;
    PipelineConfig cfg;
    GssFlags seg_gss;
    CommonIoFlags seg_io;
    bool strict_eta = false;
    bool one_sided = false;
    bool dump_vdisp = false;
    segment->add_option("input", seg_input, "disparity raster")->required();
    segment->add_option("-o,--output-prefix", seg_prefix, "prefix for output files")->required();
    segment->add_option("--bin-width", cfg.bin_width, "v-disparity bin width")
        ->capture_default_str();
    segment->add_option("--smoothness", cfg.smoothness, "path jump penalty per bin")
        ->capture_default_str();
    segment->add_option("--ransac-iterations", cfg.ransac.iterations)->capture_default_str();
    segment->add_option("--ransac-samples", cfg.ransac.sample_size)->capture_default_str();
    segment->add_option("--inlier-tol", cfg.ransac.inlier_tol)->capture_default_str();
    segment->add_option("--seed", cfg.ransac.rng_seed)->capture_default_str();
    segment->add_option("--delta", cfg.delta, "road disparity level after the transform")
        ->capture_default_str();
    segment->add_option("--otsu-bins", cfg.otsu_bins)->capture_default_str();
    segment->add_flag("--strict-eta", strict_eta,
                      "select the RANSAC hypothesis with the smallest inlier ratio");
    segment->add_flag("--one-sided", one_sided,
                      "threshold raw transformed disparities instead of residual magnitudes");
    segment->add_flag("--dump-vdisparity", dump_vdisp, "also write the v-disparity histogram");
    seg_gss.attach(segment);
    seg_io.attach(segment);

    // --- eval -----------------------------------------------------------------
    auto* eval = app.add_subcommand("eval", "synthetic roll-accuracy sweep");
    eval->fallthrough();
    SyntheticSpec eval_spec;
    std::string eval_report = "sweep.json";
    std::string eval_csv;
    int angle_count = 65;
    double angle_lo = -kPi / 4.0;
    double angle_hi = kPi / 4.0;
    GssFlags eval_gss;
    eval_gss.gss.tol = 1e-6;
    eval_gss.gss.coarse_scan_steps = 64;
    eval->add_option("-o,--report", eval_report, "sweep report JSON")->capture_default_str();
    eval->add_option("--csv", eval_csv, "also write per-angle records as CSV");
    eval->add_option("--angles", angle_count, "number of sweep angles")->capture_default_str();
    eval->add_option("--gamma-min", angle_lo, "sweep range start (rad)")->capture_default_str();
    eval->add_option("--gamma-max", angle_hi, "sweep range end (rad)")->capture_default_str();
    eval->add_option("--width", eval_spec.width)->capture_default_str();
    eval->add_option("--height", eval_spec.height)->capture_default_str();
    eval->add_option("--a0", eval_spec.model.a0)->capture_default_str();
    eval->add_option("--a1", eval_spec.model.a1)->capture_default_str();
    eval->add_option("--a2", eval_spec.model.a2)->capture_default_str();
    eval->add_option("--kappa", eval_spec.kappa, "uniform noise amplitude")->capture_default_str();
    eval->add_option("--seed", eval_spec.seed)->capture_default_str();
    eval_gss.attach(eval);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (synth->parsed()) {
            for (const auto& text : inset_args) {
                spec.insets.push_back(parse_inset(text));
            }
            return run_synth(spec, synth_out, labels_path, synth_io);
        }
        if (roll->parsed()) {
            return run_estimate_roll(roll_input, roll_gss, roll_io, roll_report, curve_path,
                                     curve_step);
        }
        if (segment->parsed()) {
            cfg.gss = seg_gss.gss;
            cfg.ransac.select_smallest_eta = strict_eta;
            cfg.one_sided_segmentation = one_sided;
            return run_segment(seg_input, seg_prefix, cfg, seg_io, strict_eta, dump_vdisp);
        }
        if (eval->parsed()) {
            return run_eval(eval_spec, angle_count, angle_lo, angle_hi, eval_gss, eval_report,
                            eval_csv);
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const SizeError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NonConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const Error& e) {
        // underdetermined / degenerate geometry / empty input
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
