#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "roadseg/path_extraction.hpp"
#include "roadseg/ransac.hpp"
#include "roadseg/rotation.hpp"
#include "roadseg/synthetic.hpp"
#include "roadseg/transform.hpp"
#include "roadseg/vdisparity.hpp"
#include "test_util.hpp"

using namespace roadseg;

namespace {

// Independent per-edge evaluation of the between-class variance, sharing only
// the binning convention with the implementation.
struct BruteOtsu {
    int best_edge = -1;
    double best_variance = -1.0;
};

BruteOtsu brute_force_otsu(const std::vector<double>& values, int bins) {
    double lo = values[0], hi = values[0];
    for (double x : values) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    const double width = (hi - lo) / bins;
    std::vector<std::uint64_t> count(static_cast<std::size_t>(bins), 0);
    std::vector<double> sum(static_cast<std::size_t>(bins), 0.0);
    for (double x : values) {
        int b = static_cast<int>((x - lo) / width);
        b = std::clamp(b, 0, bins - 1);
        ++count[static_cast<std::size_t>(b)];
        sum[static_cast<std::size_t>(b)] += x;
    }
    const double total_n = static_cast<double>(values.size());
    double total_sum = 0.0;
    for (double s : sum) total_sum += s;

    BruteOtsu out;
    for (int e = 1; e < bins; ++e) {
        double left_n = 0.0, left_sum = 0.0;
        for (int b = 0; b < e; ++b) {
            left_n += static_cast<double>(count[static_cast<std::size_t>(b)]);
            left_sum += sum[static_cast<std::size_t>(b)];
        }
        const double right_n = total_n - left_n;
        if (left_n == 0.0 || right_n == 0.0) continue;
        const double mu0 = left_sum / left_n;
        const double mu1 = (total_sum - left_sum) / right_n;
        const double variance = (left_n / total_n) * (right_n / total_n) * (mu0 - mu1) * (mu0 - mu1);
        if (variance > out.best_variance) {
            out.best_variance = variance;
            out.best_edge = e;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("pixels matching the profile map to delta") {
    DisparityImage img(8, 8);
    const QuadraticRoadModel m{4.0, 0.5, 0.125};
    for (int v = 0; v < 8; ++v) {
        for (int u = 0; u < 8; ++u) img.set(u, v, m(static_cast<double>(v)));
    }
    const auto trf = transform_map(img, m, 0.0, 30.0);
    for (int v = 0; v < 8; ++v) {
        for (int u = 0; u < 8; ++u) {
            REQUIRE(trf.is_valid(u, v));
            CHECK(trf.at(u, v) == doctest::Approx(30.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("zero roll keeps the validity mask and offsets rows in place") {
    auto img = testutil::random_map(20, 14, 8, 0.2, 10.0, 40.0);
    const QuadraticRoadModel m{5.0, 0.25, 0.0};
    const auto trf = transform_map(img, m, 0.0, 30.0);
    for (int v = 0; v < img.height(); ++v) {
        for (int u = 0; u < img.width(); ++u) {
            CHECK(trf.is_valid(u, v) == img.is_valid(u, v));
            if (img.is_valid(u, v)) {
                const double expected = img.at(u, v) - m(static_cast<double>(v)) + 30.0;
                CHECK(trf.at(u, v) == doctest::Approx(expected).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("rolled scene with the true profile flattens to delta") {
    // the roll-corrected frame realised exactly: rows carry the profile value
    SyntheticSpec spec;
    spec.width = 96;
    spec.height = 80;
    spec.model = {40.0, 0.3, 0.02};
    const auto rotated = generate_ground_truth(spec);  // gamma = 0 frame
    const double gamma = 0.2;                          // back-rotation of the result
    const auto trf = transform_map(rotated, spec.model, gamma, 30.0);
    std::size_t checked = 0;
    for (int v = 0; v < trf.height(); ++v) {
        for (int u = 0; u < trf.width(); ++u) {
            if (!trf.is_valid(u, v)) continue;
            CHECK(std::abs(trf.at(u, v) - 30.0) <= 1e-6);
            ++checked;
        }
    }
    CHECK(checked > trf.pixel_count() / 2);  // interior survives the back-rotation
}

TEST_CASE("transform residual identity under instrumented tracing") {
    SyntheticSpec spec;
    spec.width = 48;
    spec.height = 36;
    spec.model = {20.0, 0.2, 0.01};
    spec.gamma = 0.25;
    const auto original = generate_ground_truth(spec);
    const double gamma = 0.25;
    const auto rotated = rotate_map(original, gamma);
    const QuadraticRoadModel m{21.0, 0.15, 0.012};
    const double delta = 30.0;
    const auto trf = transform_map(rotated, m, gamma, delta);

    // trace each transformed pixel back through the -gamma resampling
    const double c = std::cos(-gamma), s = std::sin(-gamma);
    const double cu = trf.center_u(), cv = trf.center_v();
    std::size_t traced = 0;
    for (int v = 0; v < trf.height(); ++v) {
        for (int u = 0; u < trf.width(); ++u) {
            if (!trf.is_valid(u, v)) continue;
            const double x = u - cu, y = v - cv;
            const long su = std::lround(x * c - y * s + cu);
            const long sv = std::lround(y * c + x * s + cv);
            REQUIRE(su >= 0);
            REQUIRE(sv >= 0);
            REQUIRE(su < trf.width());
            REQUIRE(sv < trf.height());
            const int iu = static_cast<int>(su), iv = static_cast<int>(sv);
            REQUIRE(rotated.is_valid(iu, iv));
            const double expected = rotated.at(iu, iv) - m(static_cast<double>(iv)) + delta;
            CHECK(std::abs(trf.at(u, v) - expected) <= 1e-9);
            ++traced;
        }
    }
    CHECK(traced > 0);
}

TEST_CASE("otsu separates a clean bimodal population") {
    std::vector<double> values;
    for (int i = 0; i < 10; ++i) values.push_back(0.0);
    for (int i = 0; i < 10; ++i) values.push_back(10.0);
    const double thr = otsu_threshold(values, 256);
    CHECK(thr > 0.0);
    CHECK(thr < 10.0);
    for (double x : values) {
        CHECK(((x < thr) == (x == 0.0)));
    }
}

TEST_CASE("otsu isolates a single high value") {
    const std::vector<double> values{1.0, 1.0, 1.0, 9.0};
    const auto split = otsu_split(values, 256);
    CHECK(split.threshold > 1.0);
    CHECK(split.threshold <= 9.0);
    const auto brute = brute_force_otsu(values, 256);
    CHECK(split.between_class_variance == brute.best_variance);
    CHECK(split.edge_index == brute.best_edge);
}

TEST_CASE("otsu equals the brute-force edge search") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const int distinct = 2 + static_cast<int>(rng() % 63);
        std::vector<double> pool(static_cast<std::size_t>(distinct));
        std::uniform_real_distribution<double> value(-50.0, 50.0);
        for (auto& x : pool) x = value(rng);
        const int n = distinct + static_cast<int>(rng() % 100);
        std::vector<double> values;
        for (int i = 0; i < n; ++i) {
            values.push_back(pool[static_cast<std::size_t>(rng() % pool.size())]);
        }
        for (int i = 0; i < distinct; ++i) values.push_back(pool[static_cast<std::size_t>(i)]);
        const auto split = otsu_split(values, 128);
        const auto brute = brute_force_otsu(values, 128);
        CHECK(split.between_class_variance == brute.best_variance);
        CHECK(split.edge_index == brute.best_edge);
    }
}

TEST_CASE("otsu rejects unsplittable populations") {
    CHECK_THROWS_AS(otsu_threshold(std::vector<double>{3.0, 3.0, 3.0}, 16), DegenerateHistogramError);
    CHECK_THROWS_AS(otsu_threshold(std::vector<double>{3.0}, 16), DegenerateHistogramError);
    CHECK_THROWS_AS(otsu_threshold(std::vector<double>{1.0, 2.0}, 1), SizeError);
}

TEST_CASE("segmentation excludes a single displaced pixel") {
    DisparityImage img(10, 10);
    for (int v = 0; v < 10; ++v) {
        for (int u = 0; u < 10; ++u) img.set(u, v, 30.0);
    }
    img.set(3, 4, 50.0);
    const auto mask = segment_road(img, 30.0, 256);
    CHECK(mask.road_count() == 99);
    CHECK_FALSE(mask.is_road(3, 4));
}

TEST_CASE("invalid pixels are never road") {
    DisparityImage img(6, 6);
    for (int v = 0; v < 6; ++v) {
        for (int u = 0; u < 6; ++u) {
            if ((u + v) % 3 == 0) {
                img.set_invalid(u, v);
            } else {
                img.set(u, v, (u % 2 == 0) ? 30.0 : 38.0);
            }
        }
    }
    const auto mask = segment_road(img, 30.0, 64);
    CHECK(mask.road_count() <= img.valid_count());
    for (int v = 0; v < 6; ++v) {
        for (int u = 0; u < 6; ++u) {
            if (!img.is_valid(u, v)) CHECK_FALSE(mask.is_road(u, v));
        }
    }
}

TEST_CASE("pothole scene segments at high pixel accuracy") {
    DisparityImage img(80, 60);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> jitter(-0.2, 0.2);
    for (int v = 0; v < 60; ++v) {
        for (int u = 0; u < 80; ++u) {
            const bool pothole = (u >= 20 && u < 40 && v >= 30 && v < 45);
            img.set(u, v, 30.0 + jitter(rng) + (pothole ? -8.0 : 0.0));
        }
    }
    const auto mask = segment_road(img, 30.0, 256);
    std::size_t correct = 0;
    for (int v = 0; v < 60; ++v) {
        for (int u = 0; u < 80; ++u) {
            const bool pothole = (u >= 20 && u < 40 && v >= 30 && v < 45);
            if (mask.is_road(u, v) == !pothole) ++correct;
        }
    }
    CHECK(static_cast<double>(correct) / (80.0 * 60.0) >= 0.99);
}

TEST_CASE("segmentation is invariant to joint translation of delta and values") {
    // exactly representable values keep the residual population identical
    DisparityImage img(12, 9);
    std::mt19937_64 rng(12);
    for (int v = 0; v < 9; ++v) {
        for (int u = 0; u < 12; ++u) {
            img.set(u, v, 30.0 + 0.25 * static_cast<double>(rng() % 33));
        }
    }
    const double shift = 16.0;
    DisparityImage shifted = img;
    for (int v = 0; v < 9; ++v) {
        for (int u = 0; u < 12; ++u) shifted.set(u, v, img.at(u, v) + shift);
    }
    const auto a = segment_road(img, 30.0, 64);
    const auto b = segment_road(shifted, 30.0 + shift, 64);
    CHECK(a.road == b.road);
}

TEST_CASE("one-sided comparison mode marks the class nearest delta") {
    DisparityImage img(20, 10);
    for (int v = 0; v < 10; ++v) {
        for (int u = 0; u < 20; ++u) {
            img.set(u, v, (v < 7) ? 30.0 + 0.01 * u : 45.0 + 0.01 * u);
        }
    }
    const auto outcome = segment_road_one_sided(img, 30.0, 128);
    for (int v = 0; v < 10; ++v) {
        for (int u = 0; u < 20; ++u) {
            CHECK(outcome.mask.is_road(u, v) == (v < 7));
        }
    }
}

TEST_CASE("segmentation propagates degenerate inputs") {
    DisparityImage all_invalid(5, 5);
    CHECK_THROWS_AS(segment_road(all_invalid, 30.0, 64), EmptyInputError);

    DisparityImage constant(5, 5);
    for (int v = 0; v < 5; ++v) {
        for (int u = 0; u < 5; ++u) constant.set(u, v, 30.0);
    }
    CHECK_THROWS_AS(segment_road(constant, 30.0, 64), DegenerateHistogramError);
}

TEST_CASE("quantized road scene survives the model chain end to end") {
    // rotated-frame scene whose rows sit exactly on bin centres, so the path,
    // the robust fit and the transform are all exact. Rows are wide enough
    // that the per-row vote reward beats the largest bin jump cost.
    SyntheticSpec spec;
    spec.width = 400;
    spec.height = 160;
    spec.model = {100.125, 0.25, 0.25};
    const auto rotated = generate_ground_truth(spec);
    const auto hist = build_vdisparity(rotated, 0.25);
    const auto path = extract_path_dp(hist, 1.0);
    for (const auto& e : path.entries) {
        CHECK(e.d == spec.model(static_cast<double>(e.v)));  // exact centre alignment
    }
    const auto fit = ransac_parabola(path, {});
    CHECK(fit.converged);
    const auto trf = transform_map(rotated, fit.model, 0.15, 30.0);
    for (int v = 0; v < trf.height(); ++v) {
        for (int u = 0; u < trf.width(); ++u) {
            if (trf.is_valid(u, v)) {
                CHECK(std::abs(trf.at(u, v) - 30.0) <= 1e-3);
            }
        }
    }
}
