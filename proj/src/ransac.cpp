#include "roadseg/ransac.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "roadseg/errors.hpp"
#include "roadseg/quadratic_fit.hpp"

namespace roadseg {

namespace {

struct Points {
    std::vector<double> v;
    std::vector<double> d;
};

Points to_points(const std::vector<PathEntry>& entries) {
    Points p;
    p.v.reserve(entries.size());
    p.d.reserve(entries.size());
    for (const auto& e : entries) {
        p.v.push_back(static_cast<double>(e.v));
        p.d.push_back(e.d);
    }
    return p;
}

std::size_t count_inliers(const QuadraticRoadModel& m, const Points& p, double tol) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < p.v.size(); ++i) {
        if (std::abs(p.d[i] - m(p.v[i])) <= tol) ++n;
    }
    return n;
}

}  // namespace

RansacResult ransac_parabola(const OptimalPath& path, const RansacConfig& cfg) {
    if (cfg.iterations < 1) throw SizeError("ransac_parabola: iterations must be >= 1");
    if (cfg.sample_size < 3) throw SizeError("ransac_parabola: sample_size must be >= 3");
    if (!(cfg.inlier_tol > 0.0)) throw SizeError("ransac_parabola: inlier_tol must be positive");

    const std::size_t m = path.entries.size();
    const std::size_t t = static_cast<std::size_t>(cfg.sample_size);
    if (m < t) {
        throw UnderdeterminedError("ransac_parabola: path has " + std::to_string(m) +
                                   " entries, need at least " + std::to_string(t));
    }

    const Points all = to_points(path.entries);
    const double inv_m = 1.0 / static_cast<double>(m);

    bool have_hypothesis = false;
    QuadraticRoadModel selected;
    double selected_eta = 0.0;
    int degenerate_retries = 0;
    const int retry_budget = 10 * cfg.iterations;

    std::vector<std::size_t> indices(m);
    std::vector<double> sv(t), sd(t);
    for (int it = 0; it < cfg.iterations; ++it) {
        // Independent per-draw stream so the draw sequence does not depend on
        // how earlier draws consumed randomness.
        std::mt19937_64 rng(cfg.rng_seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(it + 1));
        QuadraticRoadModel hypothesis;
        while (true) {
            std::iota(indices.begin(), indices.end(), std::size_t{0});
            for (std::size_t j = 0; j < t; ++j) {
                const std::size_t r = j + static_cast<std::size_t>(rng() % (m - j));
                std::swap(indices[j], indices[r]);
                sv[j] = all.v[indices[j]];
                sd[j] = all.d[indices[j]];
            }
            try {
                hypothesis = fit_quadratic(sv, sd);
                break;
            } catch (const DegenerateGeometryError&) {
                if (++degenerate_retries > retry_budget) {
                    throw DegenerateGeometryError(
                        "ransac_parabola: exhausted resampling budget on degenerate draws");
                }
            }
        }
        const double eta = static_cast<double>(count_inliers(hypothesis, all, cfg.inlier_tol)) * inv_m;
        const bool better = !have_hypothesis ||
                            (cfg.select_smallest_eta ? eta < selected_eta : eta > selected_eta);
        if (better) {
            have_hypothesis = true;
            selected = hypothesis;
            selected_eta = eta;
        }
    }

    RansacResult result;
    result.eta = selected_eta;

    // Refinement: classify, drop outliers, refit; repeat until no outliers.
    // The first pass always refits, so a clean path ends up as a plain
    // least-squares fit over all entries. A refit may transiently push
    // borderline entries outside the tolerance band; termination is still
    // guaranteed because every round with outliers strictly shrinks the
    // entry set, and the iteration cap bounds pathological churn.
    Points current = all;
    QuadraticRoadModel model = selected;
    double best_state_eta = -1.0;
    QuadraticRoadModel best_state_model = selected;
    int iters = 0;
    while (true) {
        std::vector<double> iv, id;
        iv.reserve(current.v.size());
        id.reserve(current.v.size());
        for (std::size_t i = 0; i < current.v.size(); ++i) {
            if (std::abs(current.d[i] - model(current.v[i])) <= cfg.inlier_tol) {
                iv.push_back(current.v[i]);
                id.push_back(current.d[i]);
            }
        }
        const std::size_t outliers = current.v.size() - iv.size();

        const double state_eta =
            current.v.empty() ? 0.0 : static_cast<double>(iv.size()) / static_cast<double>(current.v.size());
        if (state_eta > best_state_eta) {
            best_state_eta = state_eta;
            best_state_model = model;
        }

        if (iv.size() < 3) {
            result.converged = false;
            result.model = best_state_model;
            result.inliers = iv.size();
            result.refinement_iterations = iters;
            return result;
        }

        current.v = std::move(iv);
        current.d = std::move(id);
        model = fit_quadratic(current.v, current.d);
        ++iters;

        if (outliers == 0) {
            result.converged = true;
            break;
        }
        if (iters >= cfg.max_refinements) {
            result.converged = false;
            model = best_state_model;
            break;
        }
    }

    result.model = model;
    result.inliers = current.v.size();
    result.refinement_iterations = iters;
    return result;
}

}  // namespace roadseg
