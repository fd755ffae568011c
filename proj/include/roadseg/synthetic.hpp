#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "roadseg/disparity_image.hpp"
#include "roadseg/road_model.hpp"
#include "roadseg/roll_estimation.hpp"

namespace roadseg {

/// Axis-aligned region in the unrotated road frame, half-open pixel bounds,
/// whose disparities are shifted by offset (negative digs a pothole, positive
/// raises an obstacle).
struct InsetRegion {
    int u0 = 0;
    int v0 = 0;
    int u1 = 0;
    int v1 = 0;
    double offset = 0.0;
};

struct SyntheticSpec {
    int width = 640;
    int height = 480;
    QuadraticRoadModel model{100.0, 0.3, 0.1};
    double gamma = 0.0;         // roll angle the generated map exhibits
    double kappa = 0.0;         // noise amplitude used by the sweep harness
    std::uint64_t seed = 0;
    std::vector<InsetRegion> insets;
    double quantize_step = 0.0; // 0 keeps exact model values; >0 rounds to that step
};

/// Ground-truth disparity map of a quadratic road surface seen by a rig
/// rolled by spec.gamma. Each pixel is assigned the road profile evaluated at
/// its exact (continuous) row coordinate in the unrotated frame, so the
/// noiseless fit energy at the true roll is zero to rounding. Pixels whose
/// unrotated position falls outside the road raster are invalid.
DisparityImage generate_ground_truth(const SyntheticSpec& spec);

/// Per-pixel road labels matching generate_ground_truth: road everywhere the
/// map is valid except over inset regions.
SegmentationMask ground_truth_labels(const SyntheticSpec& spec);

enum class NoiseKind {
    Uniform,   // kappa * omega with omega drawn uniformly from [-1, 1]
    Gaussian,  // zero-mean normal with standard deviation kappa/3
};

/// Perturbs every valid pixel with seeded noise; deterministic per seed,
/// bit-exact identity when kappa == 0.
DisparityImage add_noise(const DisparityImage& map, double kappa, std::uint64_t seed,
                         NoiseKind kind = NoiseKind::Uniform);

struct SweepRecord {
    double gamma_true = 0.0;
    double gamma_est = 0.0;
    double epsilon = 0.0;  // |gamma_true - gamma_est|
    bool ok = true;
    std::string error;
};

struct SweepReport {
    std::vector<SweepRecord> records;
    double mean_error = 0.0;  // over successful records
    double max_error = 0.0;
    std::size_t failures = 0;
};

/// Runs the roll estimator across a set of true angles: for each angle the
/// ground truth is generated (noised when base.kappa > 0, with per-angle
/// seeds derived from base.seed), estimated, and the absolute error recorded.
/// Per-angle failures are recorded instead of aborting the sweep.
SweepReport run_accuracy_sweep(const SyntheticSpec& base, std::span<const double> gammas,
                               const GssConfig& cfg = {});

/// Evenly spaced sweep grid over [lo, hi], endpoints included.
std::vector<double> uniform_angles(double lo, double hi, int count);

std::string sweep_to_json(const SweepReport& report);
std::string sweep_to_csv(const SweepReport& report);

}  // namespace roadseg
