#pragma once

namespace roadseg {

/// Quadratic vertical road profile d(v) = a0 + a1*v + a2*v^2.
struct QuadraticRoadModel {
    double a0 = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;

    double operator()(double v) const { return a0 + v * (a1 + v * a2); }

    /// Coefficients of the same profile with the row argument shifted by h:
    /// result(v) == (*this)(v + h). Used to move between centre-relative and
    /// absolute row coordinates.
    QuadraticRoadModel shift_argument(double h) const {
        return {a0 + h * (a1 + h * a2), a1 + 2.0 * a2 * h, a2};
    }
};

inline double evaluate_model(const QuadraticRoadModel& m, double v) { return m(v); }

}  // namespace roadseg
