#pragma once

#include <cstdint>

#include "roadseg/path_extraction.hpp"
#include "roadseg/road_model.hpp"

namespace roadseg {

struct RansacConfig {
    int iterations = 20;          // hypothesis draws
    int sample_size = 3;          // candidates per draw (3 = exact interpolation)
    double inlier_tol = 1.0;      // |d - d(v)| acceptance band, disparity units
    std::uint64_t rng_seed = 0;
    // Hypothesis selection rule. The default keeps the draw with the highest
    // inlier ratio, which is what makes the refinement loop start from a
    // consensus fit; the alternative keeps the lowest ratio for comparison
    // experiments.
    bool select_smallest_eta = false;
    int max_refinements = 100;
};

struct RansacResult {
    QuadraticRoadModel model;
    double eta = 0.0;              // inlier ratio of the selected hypothesis
    std::size_t inliers = 0;       // entries surviving refinement
    int refinement_iterations = 0;
    bool converged = true;
};

/// Robust parabola fit to a path: draws sample_size entries without
/// replacement, fits, scores by inlier ratio eta, selects a hypothesis, then
/// repeatedly removes outliers and refits by least squares until none remain.
/// The refinement always performs at least one full least-squares pass, so an
/// outlier-free path reduces to a plain fit over every entry. Degenerate
/// samples are redrawn against a budget of 10*iterations.
RansacResult ransac_parabola(const OptimalPath& path, const RansacConfig& cfg = {});

}  // namespace roadseg
