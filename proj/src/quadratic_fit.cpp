#include "roadseg/quadratic_fit.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "roadseg/errors.hpp"

namespace roadseg {

QuadraticRoadModel fit_quadratic(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (y.size() != n) {
        throw SizeError("fit_quadratic: x and y lengths differ");
    }
    if (n < 3) {
        throw UnderdeterminedError("fit_quadratic: need at least 3 points, got " + std::to_string(n));
    }
    const double inv_n = 1.0 / static_cast<double>(n);

    double mean_x = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean_x += x[i];
    mean_x *= inv_n;

    // Centred powers: z = x - mean(x), c2 = z^2 - mean(z^2).
    double m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = x[i] - mean_x;
        m2 += z * z;
    }
    m2 *= inv_n;
    if (!(m2 > 1e-18 * (1.0 + mean_x * mean_x))) {
        throw DegenerateGeometryError("fit_quadratic: all abscissae coincide");
    }
    const double s1 = std::sqrt(m2);

    double s2sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = x[i] - mean_x;
        const double c2 = z * z - m2;
        s2sq += c2 * c2;
    }
    s2sq *= inv_n;
    if (!(s2sq > 1e-18 * (1.0 + m2 * m2))) {
        throw DegenerateGeometryError("fit_quadratic: abscissae span fewer than 3 distinct values");
    }
    const double s2 = std::sqrt(s2sq);

    // Normalised basis b1 = z/s1, b2 = (z^2 - m2)/s2; both are mean-zero and
    // unit-RMS, so the Gram matrix is [[1,0,0],[0,1,g],[0,g,1]].
    double g = 0.0, r0 = 0.0, r1 = 0.0, r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = x[i] - mean_x;
        const double b1 = z / s1;
        const double b2 = (z * z - m2) / s2;
        g += b1 * b2;
        r0 += y[i];
        r1 += y[i] * b1;
        r2 += y[i] * b2;
    }
    g *= inv_n;
    r0 *= inv_n;
    r1 *= inv_n;
    r2 *= inv_n;

    const double det = 1.0 - g * g;
    if (!(det > 1e-12)) {
        throw DegenerateGeometryError("fit_quadratic: rank-deficient design (two distinct abscissae)");
    }
    const double beta1 = (r1 - g * r2) / det;
    const double beta2 = (r2 - g * r1) / det;

    // Expand beta0 + beta1*z/s1 + beta2*(z^2 - m2)/s2 back to raw x.
    const double q = beta2 / s2;
    const double a2 = q;
    const double a1 = beta1 / s1 - 2.0 * mean_x * q;
    const double a0 = r0 - beta1 * mean_x / s1 + q * (mean_x * mean_x - m2);
    return {a0, a1, a2};
}

double rms_residual(const QuadraticRoadModel& m, std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (y.size() != n) {
        throw SizeError("rms_residual: x and y lengths differ");
    }
    if (n == 0) {
        throw EmptyInputError("rms_residual: empty point set");
    }
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - m(x[i]);
        ss += r * r;
    }
    return std::sqrt(ss / static_cast<double>(n));
}

}  // namespace roadseg
