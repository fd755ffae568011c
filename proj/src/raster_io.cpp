#include "roadseg/raster_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <png.h>

#include <json.hpp>

namespace roadseg {

namespace fs = std::filesystem;

namespace {

std::string lower_ext(const std::string& path) {
    std::string ext = fs::path(path).extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

// Renames a fully written temp file into place so failed runs never leave
// partial outputs behind.
class AtomicFile {
public:
    explicit AtomicFile(const std::string& path)
        : final_path_(path), tmp_path_(path + ".tmp") {}

    ~AtomicFile() {
        if (!committed_) {
            std::error_code ec;
            fs::remove(tmp_path_, ec);
        }
    }

    const std::string& tmp_path() const { return tmp_path_; }

    void commit() {
        std::error_code ec;
        fs::rename(tmp_path_, final_path_, ec);
        if (ec) {
            throw IoError("failed to move temp file into place for " + final_path_ + ": " + ec.message());
        }
        committed_ = true;
    }

private:
    std::string final_path_;
    std::string tmp_path_;
    bool committed_ = false;
};

float byteswap_float(float f) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, sizeof bits);
    bits = ((bits & 0xFF000000u) >> 24) | ((bits & 0x00FF0000u) >> 8) |
           ((bits & 0x0000FF00u) << 8) | ((bits & 0x000000FFu) << 24);
    std::memcpy(&f, &bits, sizeof f);
    return f;
}

constexpr bool kHostLittleEndian = std::endian::native == std::endian::little;

// --- PFM ------------------------------------------------------------------

std::string next_pfm_token(std::istream& in) {
    std::string tok;
    if (!(in >> tok)) {
        throw IoError("truncated PFM header");
    }
    return tok;
}

DisparityImage read_pfm(const std::string& path, const RasterOptions& opts) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    const std::string magic = next_pfm_token(in);
    if (magic == "PF") {
        throw IoError(path + ": colour PFM is not a disparity map");
    }
    if (magic != "Pf") {
        throw IoError(path + ": not a PFM file (bad magic '" + magic + "')");
    }
    int width = 0, height = 0;
    double scale = 0.0;
    try {
        width = std::stoi(next_pfm_token(in));
        height = std::stoi(next_pfm_token(in));
        scale = std::stod(next_pfm_token(in));
    } catch (const std::exception&) {
        throw IoError(path + ": malformed PFM header");
    }
    if (width < 1 || height < 1) {
        throw IoError(path + ": bad PFM dimensions");
    }
    if (scale == 0.0) {
        throw IoError(path + ": PFM scale must be non-zero");
    }
    in.get();  // single whitespace byte after the scale line

    const bool file_little = scale < 0.0;
    const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    std::vector<float> data(n);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(n * sizeof(float)));
    if (static_cast<std::size_t>(in.gcount()) != n * sizeof(float)) {
        throw IoError(path + ": truncated PFM pixel data");
    }
    if (file_little != kHostLittleEndian) {
        for (auto& f : data) f = byteswap_float(f);
    }

    DisparityImage img(width, height);
    // PFM scanlines run bottom-to-top.
    for (int v = 0; v < height; ++v) {
        const float* row = data.data() + static_cast<std::size_t>(height - 1 - v) * width;
        for (int u = 0; u < width; ++u) {
            const double d = static_cast<double>(row[u]);
            if (std::isfinite(d) && d != opts.invalid_marker) {
                img.set(u, v, d);
            }
        }
    }
    return img;
}

void write_pfm(const std::string& path, const DisparityImage& map, const RasterOptions& opts) {
    AtomicFile atomic(path);
    {
        std::ofstream out(atomic.tmp_path(), std::ios::binary);
        if (!out) {
            throw IoError("cannot create " + path);
        }
        out << "Pf\n" << map.width() << " " << map.height() << "\n"
            << (kHostLittleEndian ? "-1.0" : "1.0") << "\n";
        std::vector<float> row(static_cast<std::size_t>(map.width()));
        for (int v = map.height() - 1; v >= 0; --v) {
            for (int u = 0; u < map.width(); ++u) {
                row[static_cast<std::size_t>(u)] =
                    map.is_valid(u, v) ? static_cast<float>(map.at(u, v))
                                       : static_cast<float>(opts.invalid_marker);
            }
            out.write(reinterpret_cast<const char*>(row.data()),
                      static_cast<std::streamsize>(row.size() * sizeof(float)));
        }
        if (!out) {
            throw IoError("short write to " + path);
        }
    }
    atomic.commit();
}

// --- PGM ------------------------------------------------------------------

int next_pgm_value(std::istream& in, const std::string& path) {
    // netpbm headers allow '#' comments between tokens
    while (true) {
        int c = in.peek();
        if (c == EOF) throw IoError(path + ": truncated PGM header");
        if (std::isspace(c)) {
            in.get();
            continue;
        }
        if (c == '#') {
            std::string line;
            std::getline(in, line);
            continue;
        }
        break;
    }
    int value = 0;
    if (!(in >> value)) {
        throw IoError(path + ": malformed PGM header");
    }
    return value;
}

DisparityImage read_pgm(const std::string& path, const RasterOptions& opts) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (m0 != 'P' || m1 != '5') {
        throw IoError(path + ": not a binary PGM (P5) file");
    }
    const int width = next_pgm_value(in, path);
    const int height = next_pgm_value(in, path);
    const int maxval = next_pgm_value(in, path);
    if (width < 1 || height < 1 || maxval < 1 || maxval > 65535) {
        throw IoError(path + ": bad PGM header values");
    }
    in.get();  // single whitespace before raster

    const bool two_bytes = maxval > 255;
    const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    std::vector<unsigned char> raw(n * (two_bytes ? 2 : 1));
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
        throw IoError(path + ": truncated PGM pixel data");
    }

    DisparityImage img(width, height);
    for (int v = 0; v < height; ++v) {
        for (int u = 0; u < width; ++u) {
            const std::size_t i = static_cast<std::size_t>(v) * width + u;
            const unsigned value = two_bytes
                ? (static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1]  // MSB first
                : raw[i];
            if (value == 0) continue;  // unmatched pixel
            img.set(u, v, static_cast<double>(value) / opts.pgm_scale);
        }
    }
    return img;
}

void write_pgm(const std::string& path, const DisparityImage& map, const RasterOptions& opts) {
    AtomicFile atomic(path);
    {
        std::ofstream out(atomic.tmp_path(), std::ios::binary);
        if (!out) {
            throw IoError("cannot create " + path);
        }
        out << "P5\n" << map.width() << " " << map.height() << "\n65535\n";
        std::vector<unsigned char> row(static_cast<std::size_t>(map.width()) * 2);
        for (int v = 0; v < map.height(); ++v) {
            for (int u = 0; u < map.width(); ++u) {
                unsigned value = 0;
                if (map.is_valid(u, v)) {
                    const double scaled = std::round(map.at(u, v) * opts.pgm_scale);
                    value = static_cast<unsigned>(std::clamp(scaled, 0.0, 65535.0));
                }
                row[static_cast<std::size_t>(u) * 2] = static_cast<unsigned char>(value >> 8);
                row[static_cast<std::size_t>(u) * 2 + 1] = static_cast<unsigned char>(value & 0xFF);
            }
            out.write(reinterpret_cast<const char*>(row.data()),
                      static_cast<std::streamsize>(row.size()));
        }
        if (!out) {
            throw IoError("short write to " + path);
        }
    }
    atomic.commit();
}

// --- CSV ------------------------------------------------------------------

DisparityImage read_csv(const std::string& path, const RasterOptions& opts) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::vector<std::vector<double>> grid;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        const char* p = line.c_str();
        while (*p) {
            char* end = nullptr;
            const double d = std::strtod(p, &end);
            if (end == p) {
                throw IoError(path + ": unparsable CSV cell in row " + std::to_string(grid.size()));
            }
            row.push_back(d);
            p = end;
            while (*p == ' ' || *p == '\t') ++p;
            if (*p == ',') ++p;
        }
        if (!grid.empty() && row.size() != grid.front().size()) {
            throw IoError(path + ": ragged CSV rows");
        }
        grid.push_back(std::move(row));
    }
    if (grid.empty() || grid.front().empty()) {
        throw IoError(path + ": empty CSV grid");
    }
    const int height = static_cast<int>(grid.size());
    const int width = static_cast<int>(grid.front().size());
    DisparityImage img(width, height);
    for (int v = 0; v < height; ++v) {
        for (int u = 0; u < width; ++u) {
            const double d = grid[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)];
            if (std::isfinite(d) && d != opts.invalid_marker) {
                img.set(u, v, d);
            }
        }
    }
    return img;
}

void write_csv(const std::string& path, const DisparityImage& map, const RasterOptions& opts) {
    std::ostringstream out;
    out.precision(17);
    for (int v = 0; v < map.height(); ++v) {
        for (int u = 0; u < map.width(); ++u) {
            if (u) out << ',';
            if (map.is_valid(u, v)) {
                out << map.at(u, v);
            } else {
                out << opts.invalid_marker;
            }
        }
        out << '\n';
    }
    write_text_atomic(path, out.str());
}

// --- PNG ------------------------------------------------------------------

void write_png_rows(const std::string& path, int width, int height, int bit_depth, int color_type,
                    const std::vector<png_bytep>& rows) {
    AtomicFile atomic(path);
    {
        std::FILE* fp = std::fopen(atomic.tmp_path().c_str(), "wb");
        if (!fp) {
            throw IoError("cannot create " + path);
        }
        png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        png_infop info = png ? png_create_info_struct(png) : nullptr;
        if (!png || !info) {
            if (png) png_destroy_write_struct(&png, &info);
            std::fclose(fp);
            throw IoError("libpng initialisation failed for " + path);
        }
        if (setjmp(png_jmpbuf(png))) {
            png_destroy_write_struct(&png, &info);
            std::fclose(fp);
            throw IoError("libpng write failed for " + path);
        }
        png_init_io(png, fp);
        png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
                     bit_depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                     PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png, info);
        png_write_image(png, const_cast<png_bytep*>(rows.data()));
        png_write_end(png, nullptr);
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
    }
    atomic.commit();
}

std::vector<std::uint8_t> gray_render(const DisparityImage& map) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int v = 0; v < map.height(); ++v) {
        for (int u = 0; u < map.width(); ++u) {
            if (!map.is_valid(u, v)) continue;
            lo = std::min(lo, map.at(u, v));
            hi = std::max(hi, map.at(u, v));
        }
    }
    std::vector<std::uint8_t> gray(map.pixel_count(), 0);
    const double span = hi - lo;
    for (int v = 0; v < map.height(); ++v) {
        for (int u = 0; u < map.width(); ++u) {
            if (!map.is_valid(u, v)) continue;
            const double t = span > 0.0 ? (map.at(u, v) - lo) / span : 0.5;
            gray[map.idx(u, v)] = static_cast<std::uint8_t>(1.0 + t * 254.0);
        }
    }
    return gray;
}

}  // namespace

RasterFormat detect_raster_format(const std::string& path) {
    const std::string ext = lower_ext(path);
    if (ext == ".pfm") return RasterFormat::Pfm;
    if (ext == ".pgm") return RasterFormat::Pgm;
    if (ext == ".csv") return RasterFormat::Csv;
    throw IoError("unsupported raster extension '" + ext + "' for " + path +
                  " (expected .pfm, .pgm or .csv)");
}

DisparityImage read_disparity(const std::string& path, const RasterOptions& opts) {
    switch (detect_raster_format(path)) {
        case RasterFormat::Pfm: return read_pfm(path, opts);
        case RasterFormat::Pgm: return read_pgm(path, opts);
        case RasterFormat::Csv: return read_csv(path, opts);
    }
    throw IoError("unreachable raster format");
}

void write_disparity(const std::string& path, const DisparityImage& map, const RasterOptions& opts) {
    switch (detect_raster_format(path)) {
        case RasterFormat::Pfm: write_pfm(path, map, opts); return;
        case RasterFormat::Pgm: write_pgm(path, map, opts); return;
        case RasterFormat::Csv: write_csv(path, map, opts); return;
    }
}

void write_mask_png(const std::string& path, const SegmentationMask& mask) {
    const int stride = (mask.width + 7) / 8;
    std::vector<std::uint8_t> packed(static_cast<std::size_t>(stride) * mask.height, 0);
    for (int v = 0; v < mask.height; ++v) {
        for (int u = 0; u < mask.width; ++u) {
            if (mask.is_road(u, v)) {
                packed[static_cast<std::size_t>(v) * stride + u / 8] |=
                    static_cast<std::uint8_t>(0x80u >> (u % 8));
            }
        }
    }
    std::vector<png_bytep> rows(static_cast<std::size_t>(mask.height));
    for (int v = 0; v < mask.height; ++v) {
        rows[static_cast<std::size_t>(v)] = packed.data() + static_cast<std::size_t>(v) * stride;
    }
    write_png_rows(path, mask.width, mask.height, 1, PNG_COLOR_TYPE_GRAY, rows);
}

void write_disparity_png(const std::string& path, const DisparityImage& map) {
    std::vector<std::uint8_t> gray = gray_render(map);
    std::vector<png_bytep> rows(static_cast<std::size_t>(map.height()));
    for (int v = 0; v < map.height(); ++v) {
        rows[static_cast<std::size_t>(v)] = gray.data() + static_cast<std::size_t>(v) * map.width();
    }
    write_png_rows(path, map.width(), map.height(), 8, PNG_COLOR_TYPE_GRAY, rows);
}

void write_overlay_png(const std::string& path, const DisparityImage& map,
                       const SegmentationMask& mask) {
    if (mask.width != map.width() || mask.height != map.height()) {
        throw SizeError("overlay: mask and map dimensions differ");
    }
    const std::vector<std::uint8_t> gray = gray_render(map);
    std::vector<std::uint8_t> rgb(map.pixel_count() * 3, 0);
    constexpr double kViolet[3] = {148.0, 0.0, 211.0};
    for (int v = 0; v < map.height(); ++v) {
        for (int u = 0; u < map.width(); ++u) {
            const std::size_t i = map.idx(u, v);
            const double g = gray[i];
            double r = g, gg = g, b = g;
            if (mask.is_road(u, v)) {
                r = 0.5 * g + 0.5 * kViolet[0];
                gg = 0.5 * g + 0.5 * kViolet[1];
                b = 0.5 * g + 0.5 * kViolet[2];
            }
            rgb[3 * i] = static_cast<std::uint8_t>(r);
            rgb[3 * i + 1] = static_cast<std::uint8_t>(gg);
            rgb[3 * i + 2] = static_cast<std::uint8_t>(b);
        }
    }
    std::vector<png_bytep> rows(static_cast<std::size_t>(map.height()));
    for (int v = 0; v < map.height(); ++v) {
        rows[static_cast<std::size_t>(v)] = rgb.data() + static_cast<std::size_t>(v) * map.width() * 3;
    }
    write_png_rows(path, map.width(), map.height(), 8, PNG_COLOR_TYPE_RGB, rows);
}

void write_vdisparity_png(const std::string& path, const VDisparityHistogram& hist) {
    std::uint32_t peak = 0;
    for (auto c : hist.counts) peak = std::max(peak, c);
    const double denom = peak > 0 ? std::log1p(static_cast<double>(peak)) : 1.0;
    std::vector<std::uint8_t> gray(hist.counts.size(), 0);
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
        if (hist.counts[i] == 0) continue;
        gray[i] = static_cast<std::uint8_t>(
            std::round(255.0 * std::log1p(static_cast<double>(hist.counts[i])) / denom));
    }
    std::vector<png_bytep> rows(static_cast<std::size_t>(hist.rows));
    for (int r = 0; r < hist.rows; ++r) {
        rows[static_cast<std::size_t>(r)] = gray.data() + static_cast<std::size_t>(r) * hist.bins;
    }
    write_png_rows(path, hist.bins, hist.rows, 8, PNG_COLOR_TYPE_GRAY, rows);
}

std::string vdisparity_to_csv(const VDisparityHistogram& hist) {
    std::ostringstream out;
    out.precision(17);
    out << "# rows=" << hist.rows << " bins=" << hist.bins << " bin_width=" << hist.bin_width
        << " d_min=" << hist.d_min << '\n';
    for (int r = 0; r < hist.rows; ++r) {
        for (int b = 0; b < hist.bins; ++b) {
            if (b) out << ',';
            out << hist.count(r, b);
        }
        out << '\n';
    }
    return out.str();
}

std::string path_to_csv(const OptimalPath& path) {
    std::ostringstream out;
    out.precision(17);
    out << "v,d\n";
    for (const auto& e : path.entries) {
        out << e.v << ',' << e.d << '\n';
    }
    return out.str();
}

std::string curve_to_csv(const std::vector<std::pair<double, double>>& curve) {
    std::ostringstream out;
    out.precision(17);
    out << "gamma,e_min\n";
    for (const auto& [gamma, e] : curve) {
        out << gamma << ',' << e << '\n';
    }
    return out.str();
}

std::string mask_to_rle_json(const SegmentationMask& mask) {
    nlohmann::json j;
    j["schema"] = 1;
    j["width"] = mask.width;
    j["height"] = mask.height;
    j["order"] = "row-major";
    j["first_value"] = 0;  // runs alternate starting with non-road
    std::vector<std::uint64_t> runs;
    std::uint8_t current = 0;
    std::uint64_t length = 0;
    for (std::uint8_t value : mask.road) {
        if (value == current) {
            ++length;
        } else {
            runs.push_back(length);
            current = value;
            length = 1;
        }
    }
    runs.push_back(length);
    j["runs"] = runs;
    return j.dump();
}

void write_text_atomic(const std::string& path, const std::string& content) {
    AtomicFile atomic(path);
    {
        std::ofstream out(atomic.tmp_path(), std::ios::binary);
        if (!out) {
            throw IoError("cannot create " + path);
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw IoError("short write to " + path);
        }
    }
    atomic.commit();
}

}  // namespace roadseg
