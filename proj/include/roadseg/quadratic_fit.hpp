#pragma once

#include <span>

#include "roadseg/road_model.hpp"

namespace roadseg {

/// Least-squares parabola fit y ~ a0 + a1*x + a2*x^2 via the 3x3 normal
/// equations. The x and x^2 columns are mean-centred and scaled before the
/// solve to keep the system well conditioned; coefficients are mapped back to
/// the raw x argument. Three distinct abscissae reduce to exact interpolation.
///
/// Throws UnderdeterminedError for fewer than 3 points and
/// DegenerateGeometryError when the design matrix is rank deficient
/// (e.g. at most two distinct x values).
QuadraticRoadModel fit_quadratic(std::span<const double> x, std::span<const double> y);

/// Root-mean-square residual of a model over a point set.
double rms_residual(const QuadraticRoadModel& m, std::span<const double> x, std::span<const double> y);

}  // namespace roadseg
