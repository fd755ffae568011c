#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "roadseg/raster_io.hpp"
#include "test_util.hpp"

using namespace roadseg;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path dir;
    TempDir() {
        dir = fs::temp_directory_path() / ("roadseg_io_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

DisparityImage float_friendly_map() {
    // values exactly representable in float32 so the PFM round trip is exact
    DisparityImage img(7, 5);
    for (int v = 0; v < 5; ++v) {
        for (int u = 0; u < 7; ++u) {
            if ((u * v) % 5 == 3) {
                img.set_invalid(u, v);
            } else {
                img.set(u, v, 1.5 + 0.25 * u + 8.0 * v);
            }
        }
    }
    return img;
}

void check_equal(const DisparityImage& a, const DisparityImage& b) {
    REQUIRE(a.width() == b.width());
    REQUIRE(a.height() == b.height());
    for (int v = 0; v < a.height(); ++v) {
        for (int u = 0; u < a.width(); ++u) {
            CHECK(a.is_valid(u, v) == b.is_valid(u, v));
            if (a.is_valid(u, v) && b.is_valid(u, v)) {
                CHECK(a.at(u, v) == b.at(u, v));
            }
        }
    }
}

bool has_png_magic(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    unsigned char magic[8] = {};
    in.read(reinterpret_cast<char*>(magic), 8);
    static const unsigned char expected[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
    return in && std::memcmp(magic, expected, 8) == 0;
}

}  // namespace

TEST_CASE("pfm round trip preserves values and validity") {
    TempDir tmp;
    const auto img = float_friendly_map();
    const std::string path = tmp / "map.pfm";
    write_disparity(path, img);
    check_equal(read_disparity(path), img);
}

TEST_CASE("pfm reader honours the scale line's endianness sign") {
    TempDir tmp;
    const auto img = float_friendly_map();
    const std::string le_path = tmp / "little.pfm";
    write_disparity(le_path, img);

    // byte-swap the payload and flip the scale sign: a big-endian file
    std::ifstream in(le_path, std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    const auto header_end = content.find("-1.0\n");
    REQUIRE(header_end != std::string::npos);
    std::string swapped = content.substr(0, header_end) + "1.0\n";
    const std::size_t data_start = header_end + 5;
    for (std::size_t i = data_start; i + 3 < content.size(); i += 4) {
        swapped += content[i + 3];
        swapped += content[i + 2];
        swapped += content[i + 1];
        swapped += content[i];
    }
    const std::string be_path = tmp / "big.pfm";
    std::ofstream out(be_path, std::ios::binary);
    out.write(swapped.data(), static_cast<std::streamsize>(swapped.size()));
    out.close();

    check_equal(read_disparity(be_path), img);
}

TEST_CASE("pfm reader rejects malformed files") {
    TempDir tmp;
    const std::string truncated = tmp / "truncated.pfm";
    {
        std::ofstream out(truncated, std::ios::binary);
        out << "Pf\n100 100\n-1.0\n";
        const float few[4] = {1, 2, 3, 4};
        out.write(reinterpret_cast<const char*>(few), sizeof few);
    }
    CHECK_THROWS_AS(read_disparity(truncated), IoError);

    const std::string colour = tmp / "colour.pfm";
    {
        std::ofstream out(colour, std::ios::binary);
        out << "PF\n2 2\n-1.0\n";
    }
    CHECK_THROWS_AS(read_disparity(colour), IoError);

    const std::string garbage = tmp / "garbage.pfm";
    {
        std::ofstream out(garbage, std::ios::binary);
        out << "hello world";
    }
    CHECK_THROWS_AS(read_disparity(garbage), IoError);

    CHECK_THROWS_AS(read_disparity(tmp / "missing.pfm"), IoError);
}

TEST_CASE("pgm round trip with scale divisor") {
    TempDir tmp;
    DisparityImage img(6, 4);
    for (int v = 0; v < 4; ++v) {
        for (int u = 0; u < 6; ++u) {
            if (u == 2 && v == 1) {
                img.set_invalid(u, v);
            } else {
                img.set(u, v, (1 + u + 6 * v) / 256.0 * 17.0);  // multiples of 1/256
            }
        }
    }
    const std::string path = tmp / "map.pgm";
    RasterOptions opts;
    opts.pgm_scale = 256.0;
    write_disparity(path, img, opts);
    check_equal(read_disparity(path, opts), img);
}

TEST_CASE("eight-bit pgm reads") {
    TempDir tmp;
    const std::string path = tmp / "small.pgm";
    {
        std::ofstream out(path, std::ios::binary);
        out << "P5\n# comment line\n3 2\n255\n";
        const unsigned char data[6] = {0, 10, 20, 30, 40, 50};
        out.write(reinterpret_cast<const char*>(data), 6);
    }
    RasterOptions opts;
    opts.pgm_scale = 10.0;
    const auto img = read_disparity(path, opts);
    CHECK_FALSE(img.is_valid(0, 0));  // raw zero is unmatched
    CHECK(img.at(1, 0) == doctest::Approx(1.0));
    CHECK(img.at(2, 1) == doctest::Approx(5.0));
}

TEST_CASE("csv round trip and validation") {
    TempDir tmp;
    const auto img = testutil::random_map(9, 6, 21, 0.2, 1.0, 99.0);
    const std::string path = tmp / "map.csv";
    write_disparity(path, img);
    check_equal(read_disparity(path), img);

    const std::string ragged = tmp / "ragged.csv";
    write_text_atomic(ragged, "1,2,3\n4,5\n");
    CHECK_THROWS_AS(read_disparity(ragged), IoError);

    const std::string empty = tmp / "empty.csv";
    write_text_atomic(empty, "");
    CHECK_THROWS_AS(read_disparity(empty), IoError);
}

TEST_CASE("unsupported extensions are rejected") {
    CHECK_THROWS_AS(detect_raster_format("foo.bmp"), IoError);
    CHECK_THROWS_AS(read_disparity("foo.tiff"), IoError);
    CHECK(detect_raster_format("FOO.PFM") == RasterFormat::Pfm);
}

TEST_CASE("atomic text writes leave no temp files") {
    TempDir tmp;
    const std::string path = tmp / "report.json";
    write_text_atomic(path, "{\"ok\":true}");
    std::ifstream in(path);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == "{\"ok\":true}");
    CHECK_FALSE(fs::exists(path + ".tmp"));
}

TEST_CASE("mask rle json reconstructs the mask") {
    SegmentationMask mask;
    mask.width = 5;
    mask.height = 3;
    mask.road = {0, 0, 1, 1, 1,
                 1, 0, 0, 1, 0,
                 1, 1, 1, 1, 1};
    const auto j = nlohmann::json::parse(mask_to_rle_json(mask));
    CHECK(j["schema"] == 1);
    CHECK(j["width"] == 5);
    CHECK(j["height"] == 3);
    std::vector<std::uint8_t> decoded;
    std::uint8_t value = j["first_value"].get<int>() != 0 ? 1 : 0;
    for (const auto& run : j["runs"]) {
        for (std::uint64_t i = 0; i < run.get<std::uint64_t>(); ++i) decoded.push_back(value);
        value = value ? 0 : 1;
    }
    CHECK(decoded == mask.road);
}

TEST_CASE("png writers emit png files") {
    TempDir tmp;
    const auto img = float_friendly_map();
    SegmentationMask mask;
    mask.width = img.width();
    mask.height = img.height();
    mask.road.assign(img.pixel_count(), 0);
    for (int u = 0; u < img.width(); ++u) mask.road[static_cast<std::size_t>(u)] = 1;

    const std::string mask_png = tmp / "mask.png";
    const std::string gray_png = tmp / "gray.png";
    const std::string overlay_png = tmp / "overlay.png";
    write_mask_png(mask_png, mask);
    write_disparity_png(gray_png, img);
    write_overlay_png(overlay_png, img, mask);
    CHECK(has_png_magic(mask_png));
    CHECK(has_png_magic(gray_png));
    CHECK(has_png_magic(overlay_png));

    SegmentationMask wrong = mask;
    wrong.width = 3;
    CHECK_THROWS_AS(write_overlay_png(tmp / "bad.png", img, wrong), SizeError);
}

TEST_CASE("csv dump helpers") {
    OptimalPath path;
    path.entries = {{0, 10.5}, {1, 11.5}};
    const std::string csv = path_to_csv(path);
    CHECK(csv == "v,d\n0,10.5\n1,11.5\n");

    const std::vector<std::pair<double, double>> curve{{-0.5, 2.0}, {0.5, 1.0}};
    const std::string curve_csv = curve_to_csv(curve);
    CHECK(curve_csv.find("gamma,e_min\n") == 0);
    CHECK(std::count(curve_csv.begin(), curve_csv.end(), '\n') == 3);
}
