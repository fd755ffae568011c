#pragma once

#include <numbers>
#include <utility>
#include <vector>

#include "roadseg/disparity_image.hpp"
#include "roadseg/road_model.hpp"

namespace roadseg {

/// Golden-section search configuration for roll-angle estimation.
struct GssConfig {
    double gamma_lo = -std::numbers::pi / 2.0;  // search bracket, open end
    double gamma_hi = std::numbers::pi / 2.0;   // search bracket, closed end
    double tol = std::numbers::pi / 1800.0;     // termination width
    double k = 0.618;                           // golden section factor
    // Grid size of the exhaustive pre-scan that brackets the global minimum
    // before refinement. 0 runs bare golden-section over the full bracket.
    int coarse_scan_steps = 36;
};

struct EnergyResult {
    double e_min = 0.0;            // RMS fit residual at this angle
    QuadraticRoadModel model;      // fitted profile over centre-relative rotated rows
};

struct RollEstimate {
    double gamma = 0.0;            // estimated roll angle, radians
    double e_min = 0.0;            // energy at gamma
    long evaluations = 0;          // energy evaluations performed
    int bracket_shrinks = 0;       // golden-section iterations
    bool flat_objective = false;   // energy identical at every probe (roll unidentifiable)
    QuadraticRoadModel model;      // fit at the returned gamma (centre-relative rows)
    std::vector<std::pair<double, double>> trace;  // (gamma, e_min) per evaluation
};

/// Fits the quadratic road profile over rotated row coordinates and returns
/// the RMS residual energy. Rotation happens in coordinate space only; the
/// map is never resampled here. The angle is folded into (-pi/2, pi/2] first,
/// which realises the half-turn symmetry of the energy exactly.
EnergyResult energy_at_gamma(const DisparityImage& map, double gamma);

/// Samples the energy over (-pi/2, pi/2] at the given step, in increasing
/// gamma order. Useful for plotting the energy curve and as a slow oracle.
std::vector<std::pair<double, double>> scan_energy_curve(const DisparityImage& map, double step);

/// Golden-section search for the roll angle minimizing the fit energy:
/// probe g3 = k*g1 + (1-k)*g2 and g4 = k*g2 + (1-k)*g1, keep the half that
/// contains the smaller energy, loop while g2 - g1 > tol. Returns the best
/// probed angle (not the bracket midpoint). With coarse_scan_steps > 0 an
/// exhaustive pre-scan narrows the bracket to the grid points adjacent to the
/// global minimum first.
RollEstimate estimate_roll_gss(const DisparityImage& map, const GssConfig& cfg = {});

}  // namespace roadseg
