#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "roadseg/disparity_image.hpp"
#include "roadseg/road_model.hpp"
#include "test_util.hpp"

using namespace roadseg;

TEST_CASE("construction flags markers and non-finite entries invalid") {
    const auto all_valid = new_disparity_image(2, 2, {1, 2, 3, 4}, -1.0);
    CHECK(all_valid.valid_count() == 4);
    CHECK(all_valid.center_u() == doctest::Approx(0.5));
    CHECK(all_valid.center_v() == doctest::Approx(0.5));

    const auto one_marker = new_disparity_image(2, 2, {1, -1, 3, 4}, -1.0);
    CHECK(one_marker.valid_count() == 3);
    CHECK_FALSE(one_marker.is_valid(1, 0));

    const auto nan = std::numeric_limits<double>::quiet_NaN();
    const auto inf = std::numeric_limits<double>::infinity();
    const auto with_nonfinite = new_disparity_image(2, 2, {1, nan, inf, 4}, -1.0);
    CHECK(with_nonfinite.valid_count() == 2);
}

TEST_CASE("centre sits at the geometric midpoint") {
    const DisparityImage img(640, 480);
    CHECK(img.center_u() == doctest::Approx(319.5));
    CHECK(img.center_v() == doctest::Approx(239.5));
}

TEST_CASE("dimension mismatches are rejected") {
    CHECK_THROWS_AS(new_disparity_image(2, 2, {1, 2, 3}, -1.0), SizeError);
    CHECK_THROWS_AS(new_disparity_image(0, 4, {}, -1.0), SizeError);
    CHECK_THROWS_AS(new_disparity_image(3, -1, {}, -1.0), SizeError);
}

TEST_CASE("valid values round-trip bit-exactly") {
    const auto img = testutil::random_map(17, 11, 42, 0.25);
    DisparityImage copy(img.width(), img.height());
    for (int v = 0; v < img.height(); ++v) {
        for (int u = 0; u < img.width(); ++u) {
            if (img.is_valid(u, v)) copy.set(u, v, img.at(u, v));
        }
    }
    for (int v = 0; v < img.height(); ++v) {
        for (int u = 0; u < img.width(); ++u) {
            CHECK(copy.is_valid(u, v) == img.is_valid(u, v));
            if (img.is_valid(u, v)) {
                CHECK(copy.at(u, v) == img.at(u, v));  // bit-exact
            }
        }
    }
}

TEST_CASE("quadratic model evaluation") {
    const QuadraticRoadModel m{100.0, 0.3, 0.1};
    CHECK(evaluate_model(m, 0.0) == 100.0);
    CHECK(evaluate_model(m, 10.0) == 113.0);

    const QuadraticRoadModel constant{7.25, 0.0, 0.0};
    for (double v : {-3.0, 0.0, 5.5, 1000.0}) {
        CHECK(evaluate_model(constant, v) == 7.25);
    }
}

TEST_CASE("argument shift reparameterizes exactly") {
    const QuadraticRoadModel m{2.0, -1.5, 0.25};
    const QuadraticRoadModel shifted = m.shift_argument(3.5);
    for (double v : {-10.0, -1.0, 0.0, 2.0, 117.0}) {
        CHECK(shifted(v) == doctest::Approx(m(v + 3.5)).epsilon(1e-14));
    }
}

TEST_CASE("mask road count") {
    SegmentationMask mask;
    mask.width = 3;
    mask.height = 2;
    mask.road = {1, 0, 1, 0, 0, 1};
    CHECK(mask.road_count() == 3);
    CHECK(mask.is_road(0, 0));
    CHECK_FALSE(mask.is_road(1, 0));
    CHECK(mask.is_road(2, 1));
}
