#include "roadseg/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

namespace roadseg {

namespace {

void validate(const SyntheticSpec& spec) {
    if (spec.width < 8 || spec.height < 8) {
        throw SizeError("synthetic raster must be at least 8x8");
    }
    if (!(spec.kappa >= 0.0)) {
        throw SizeError("noise amplitude must be non-negative");
    }
    if (spec.quantize_step < 0.0) {
        throw SizeError("quantize step must be non-negative");
    }
}

struct RoadFrame {
    double c, s, cu, cv;
    int width, height;

    // Unrotated road-frame coordinates of a rolled-map pixel.
    void road_coords(int u, int v, double& ru, double& rv) const {
        const double x = static_cast<double>(u) - cu;
        const double y = static_cast<double>(v) - cv;
        ru = x * c + y * s + cu;
        rv = y * c - x * s + cv;
    }

    bool in_footprint(double ru, double rv) const {
        return ru >= -0.5 && ru < static_cast<double>(width) - 0.5 &&
               rv >= -0.5 && rv < static_cast<double>(height) - 0.5;
    }
};

bool inside_inset(const InsetRegion& r, double ru, double rv) {
    const double pu = std::floor(ru + 0.5);
    const double pv = std::floor(rv + 0.5);
    return pu >= r.u0 && pu < r.u1 && pv >= r.v0 && pv < r.v1;
}

// 53-bit uniform in [0, 1).
double next_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

DisparityImage generate_ground_truth(const SyntheticSpec& spec) {
    validate(spec);
    const RoadFrame frame{std::cos(spec.gamma), std::sin(spec.gamma),
                          0.5 * (spec.width - 1), 0.5 * (spec.height - 1),
                          spec.width, spec.height};
    DisparityImage img(spec.width, spec.height);
    for (int v = 0; v < spec.height; ++v) {
        for (int u = 0; u < spec.width; ++u) {
            double ru, rv;
            frame.road_coords(u, v, ru, rv);
            if (!frame.in_footprint(ru, rv)) continue;
            double d = spec.model(rv);
            for (const auto& inset : spec.insets) {
                if (inside_inset(inset, ru, rv)) d += inset.offset;
            }
            if (spec.quantize_step > 0.0) {
                d = std::round(d / spec.quantize_step) * spec.quantize_step;
            }
            img.set(u, v, d);
        }
    }
    return img;
}

SegmentationMask ground_truth_labels(const SyntheticSpec& spec) {
    validate(spec);
    const RoadFrame frame{std::cos(spec.gamma), std::sin(spec.gamma),
                          0.5 * (spec.width - 1), 0.5 * (spec.height - 1),
                          spec.width, spec.height};
    SegmentationMask mask;
    mask.width = spec.width;
    mask.height = spec.height;
    mask.road.assign(static_cast<std::size_t>(spec.width) * static_cast<std::size_t>(spec.height), 0);
    for (int v = 0; v < spec.height; ++v) {
        for (int u = 0; u < spec.width; ++u) {
            double ru, rv;
            frame.road_coords(u, v, ru, rv);
            if (!frame.in_footprint(ru, rv)) continue;
            bool road = true;
            for (const auto& inset : spec.insets) {
                if (inside_inset(inset, ru, rv)) {
                    road = false;
                    break;
                }
            }
            if (road) {
                mask.road[static_cast<std::size_t>(v) * static_cast<std::size_t>(spec.width) +
                          static_cast<std::size_t>(u)] = 1;
            }
        }
    }
    return mask;
}

DisparityImage add_noise(const DisparityImage& map, double kappa, std::uint64_t seed, NoiseKind kind) {
    if (!(kappa >= 0.0)) {
        throw SizeError("noise amplitude must be non-negative");
    }
    if (kappa == 0.0) {
        return map;
    }
    DisparityImage out = map;
    std::mt19937_64 rng(seed);
    for (int v = 0; v < out.height(); ++v) {
        for (int u = 0; u < out.width(); ++u) {
            if (!out.is_valid(u, v)) continue;
            double perturbation;
            if (kind == NoiseKind::Uniform) {
                perturbation = kappa * (2.0 * next_unit(rng) - 1.0);
            } else {
                // Box-Muller; hand-rolled so the stream is identical across
                // standard library implementations.
                const double r1 = std::max(next_unit(rng), 0x1.0p-53);
                const double r2 = next_unit(rng);
                perturbation = (kappa / 3.0) * std::sqrt(-2.0 * std::log(r1)) *
                               std::cos(2.0 * std::numbers::pi * r2);
            }
            out.set(u, v, out.at(u, v) + perturbation);
        }
    }
    return out;
}

SweepReport run_accuracy_sweep(const SyntheticSpec& base, std::span<const double> gammas,
                               const GssConfig& cfg) {
    if (gammas.empty()) {
        throw EmptyInputError("accuracy sweep needs at least one angle");
    }
    SweepReport report;
    report.records.reserve(gammas.size());
    double sum = 0.0;
    std::size_t ok_count = 0;
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        SweepRecord rec;
        rec.gamma_true = gammas[i];
        try {
            SyntheticSpec spec = base;
            spec.gamma = gammas[i];
            DisparityImage map = generate_ground_truth(spec);
            if (base.kappa > 0.0) {
                map = add_noise(map, base.kappa, base.seed + i, NoiseKind::Uniform);
            }
            const RollEstimate est = estimate_roll_gss(map, cfg);
            rec.gamma_est = est.gamma;
            rec.epsilon = std::abs(rec.gamma_true - rec.gamma_est);
            sum += rec.epsilon;
            report.max_error = std::max(report.max_error, rec.epsilon);
            ++ok_count;
        } catch (const Error& e) {
            rec.ok = false;
            rec.error = e.what();
            ++report.failures;
        }
        report.records.push_back(std::move(rec));
    }
    if (ok_count > 0) {
        report.mean_error = sum / static_cast<double>(ok_count);
    }
    return report;
}

std::vector<double> uniform_angles(double lo, double hi, int count) {
    if (count < 1) {
        throw SizeError("angle grid needs at least one sample");
    }
    std::vector<double> angles(static_cast<std::size_t>(count));
    if (count == 1) {
        angles[0] = 0.5 * (lo + hi);
        return angles;
    }
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (int i = 0; i < count; ++i) {
        angles[static_cast<std::size_t>(i)] = lo + static_cast<double>(i) * step;
    }
    return angles;
}

std::string sweep_to_json(const SweepReport& report) {
    nlohmann::json j;
    j["schema"] = 1;
    j["mean_error_rad"] = report.mean_error;
    j["max_error_rad"] = report.max_error;
    j["mean_error_deg"] = report.mean_error * 180.0 / std::numbers::pi;
    j["max_error_deg"] = report.max_error * 180.0 / std::numbers::pi;
    j["failures"] = report.failures;
    auto& records = j["records"];
    records = nlohmann::json::array();
    for (const auto& r : report.records) {
        nlohmann::json e;
        e["gamma_true"] = r.gamma_true;
        if (r.ok) {
            e["gamma_est"] = r.gamma_est;
            e["epsilon"] = r.epsilon;
        } else {
            e["error"] = r.error;
        }
        records.push_back(std::move(e));
    }
    return j.dump(2);
}

std::string sweep_to_csv(const SweepReport& report) {
    std::ostringstream out;
    out.precision(17);
    out << "gamma_true,gamma_est,epsilon,ok\n";
    for (const auto& r : report.records) {
        if (r.ok) {
            out << r.gamma_true << ',' << r.gamma_est << ',' << r.epsilon << ",1\n";
        } else {
            out << r.gamma_true << ",nan,nan,0\n";
        }
    }
    return out.str();
}

}  // namespace roadseg
