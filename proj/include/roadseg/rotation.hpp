#pragma once

#include "roadseg/disparity_image.hpp"

namespace roadseg {

struct RotatedCoord {
    double u_prime = 0.0;
    double v_prime = 0.0;
};

/// Rotates pixel coordinates (u, v) by angle gamma about (center_u, center_v):
///   u' = (u - u_o)*cos(g) + (v - v_o)*sin(g)
///   v' = (v - v_o)*cos(g) - (u - u_o)*sin(g)
/// The result is centre-relative (origin at the raster centre).
RotatedCoord rotate_coords(double u, double v, double center_u, double center_v, double gamma);

/// Resamples a disparity map under the coordinate rotation above, keeping the
/// input canvas. Destination pixels look up their source by the inverse
/// rotation with nearest-neighbour rounding; sources outside the raster or on
/// invalid pixels yield invalid output. Disparity values are copied
/// unchanged - rotation moves pixels, never rescales disparities.
DisparityImage rotate_map(const DisparityImage& map, double gamma);

}  // namespace roadseg
