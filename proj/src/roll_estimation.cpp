#include "roadseg/roll_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "roadseg/quadratic_fit.hpp"

namespace roadseg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;

// Folds an angle into (-pi/2, pi/2]. Rotating by gamma + pi negates both
// rotated coordinates, and a negated abscissa leaves the parabola fit
// residual unchanged, so the energy is pi-periodic; folding makes the
// equality exact in floating point as well.
double fold_half_turn(double gamma) {
    double g = std::remainder(gamma, kPi);  // lands in [-pi/2, pi/2]
    if (g <= -kHalfPi) g += kPi;
    return g;
}

}  // namespace

EnergyResult energy_at_gamma(const DisparityImage& map, double gamma) {
    if (!std::isfinite(gamma)) {
        throw SizeError("energy_at_gamma: gamma must be finite");
    }
    const double g = fold_half_turn(gamma);
    const double c = std::cos(g);
    const double s = std::sin(g);
    const double cu = map.center_u();
    const double cv = map.center_v();

    const std::size_t n = map.valid_count();
    if (n < 3) {
        throw UnderdeterminedError("energy_at_gamma: need at least 3 valid pixels, got " + std::to_string(n));
    }

    std::vector<double> vprime;
    std::vector<double> disp;
    vprime.reserve(n);
    disp.reserve(n);
    for (int v = 0; v < map.height(); ++v) {
        const double yc = (static_cast<double>(v) - cv) * c;
        for (int u = 0; u < map.width(); ++u) {
            if (!map.is_valid(u, v)) continue;
            vprime.push_back(yc - (static_cast<double>(u) - cu) * s);
            disp.push_back(map.at(u, v));
        }
    }

    EnergyResult res;
    res.model = fit_quadratic(vprime, disp);
    res.e_min = rms_residual(res.model, vprime, disp);
    return res;
}

std::vector<std::pair<double, double>> scan_energy_curve(const DisparityImage& map, double step) {
    if (!(step > 0.0)) {
        throw SizeError("scan_energy_curve: step must be positive");
    }
    std::vector<std::pair<double, double>> curve;
    const double guard = kHalfPi + step * 1e-9;
    for (long k = 1;; ++k) {
        const double gamma = -kHalfPi + static_cast<double>(k) * step;
        if (gamma > guard) break;
        curve.emplace_back(gamma, energy_at_gamma(map, gamma).e_min);
    }
    return curve;
}

RollEstimate estimate_roll_gss(const DisparityImage& map, const GssConfig& cfg) {
    if (!(cfg.gamma_lo < cfg.gamma_hi)) {
        throw SizeError("estimate_roll_gss: bracket must satisfy gamma_lo < gamma_hi");
    }
    if (!(cfg.k > 0.5 && cfg.k < 1.0)) {
        throw SizeError("estimate_roll_gss: golden section factor must lie in (0.5, 1)");
    }
    if (!(cfg.tol > 0.0)) {
        throw SizeError("estimate_roll_gss: tolerance must be positive");
    }
    if (cfg.coarse_scan_steps < 0) {
        throw SizeError("estimate_roll_gss: coarse_scan_steps must be non-negative");
    }

    RollEstimate est;
    double best_e = std::numeric_limits<double>::infinity();
    double best_gamma = cfg.gamma_lo;
    QuadraticRoadModel best_model;

    auto evaluate = [&](double gamma) {
        const EnergyResult r = energy_at_gamma(map, gamma);
        est.trace.emplace_back(gamma, r.e_min);
        ++est.evaluations;
        if (r.e_min < best_e) {
            best_e = r.e_min;
            best_gamma = gamma;
            best_model = r.model;
        }
        return r.e_min;
    };

    double g1 = cfg.gamma_lo;
    double g2 = cfg.gamma_hi;

    if (cfg.coarse_scan_steps > 0) {
        const double step = (cfg.gamma_hi - cfg.gamma_lo) / static_cast<double>(cfg.coarse_scan_steps);
        double grid_best_e = std::numeric_limits<double>::infinity();
        double grid_best_gamma = cfg.gamma_hi;
        for (int j = 1; j <= cfg.coarse_scan_steps; ++j) {
            const double gamma = cfg.gamma_lo + static_cast<double>(j) * step;
            const double e = evaluate(gamma);
            if (e < grid_best_e) {
                grid_best_e = e;
                grid_best_gamma = gamma;
            }
        }
        g1 = std::max(cfg.gamma_lo, grid_best_gamma - step);
        g2 = std::min(cfg.gamma_hi, grid_best_gamma + step);
    }

    evaluate(g1);
    evaluate(g2);

    const double k = cfg.k;
    while (g2 - g1 > cfg.tol) {
        const double g3 = k * g1 + (1.0 - k) * g2;
        const double g4 = k * g2 + (1.0 - k) * g1;
        const double e3 = evaluate(g3);
        const double e4 = evaluate(g4);
        if (e3 > e4) {
            g1 = g3;
        } else {
            g2 = g4;
        }
        ++est.bracket_shrinks;
    }

    // A constant map yields an identically-flat objective; the roll is then
    // unidentifiable and the bracket midpoint is reported with a flag.
    double trace_max = -std::numeric_limits<double>::infinity();
    for (const auto& [gamma, e] : est.trace) trace_max = std::max(trace_max, e);
    if (trace_max - best_e <= 1e-12 * std::max(1.0, trace_max)) {
        est.flat_objective = true;
        const double mid = 0.5 * (cfg.gamma_lo + cfg.gamma_hi);
        const EnergyResult r = energy_at_gamma(map, mid);
        est.trace.emplace_back(mid, r.e_min);
        ++est.evaluations;
        est.gamma = mid;
        est.e_min = r.e_min;
        est.model = r.model;
        return est;
    }

    est.gamma = best_gamma;
    est.e_min = best_e;
    est.model = best_model;
    return est;
}

}  // namespace roadseg
