#pragma once

#include <string>
#include <utility>
#include <vector>

#include "roadseg/disparity_image.hpp"
#include "roadseg/path_extraction.hpp"
#include "roadseg/vdisparity.hpp"

namespace roadseg {

enum class RasterFormat { Pfm, Pgm, Csv };

struct RasterOptions {
    double invalid_marker = 0.0;  // PFM/CSV value flagged invalid (non-finite always is)
    double pgm_scale = 256.0;     // disparity = raw / pgm_scale; raw 0 is invalid
};

/// Chooses a raster format from the file extension (.pfm, .pgm, .csv).
RasterFormat detect_raster_format(const std::string& path);

/// Reads a disparity map. PFM: 32-bit float greyscale, bottom-up rows, the
/// scale line's sign encoding endianness. PGM: binary P5, 8- or 16-bit
/// (16-bit samples big-endian), values divided by pgm_scale. CSV: headerless
/// comma-separated grid.
DisparityImage read_disparity(const std::string& path, const RasterOptions& opts = {});

/// Writes a disparity map in the format implied by the extension. Invalid
/// pixels are stored as the invalid marker (PFM/CSV) or raw 0 (PGM). All
/// writes go through a temp file renamed into place.
void write_disparity(const std::string& path, const DisparityImage& map,
                     const RasterOptions& opts = {});

/// 1-bit PNG, road pixels white.
void write_mask_png(const std::string& path, const SegmentationMask& mask);

/// 8-bit grayscale PNG of the disparity map, valid range stretched to 1..255,
/// invalid pixels black.
void write_disparity_png(const std::string& path, const DisparityImage& map);

/// Grayscale rendering with road pixels blended toward violet.
void write_overlay_png(const std::string& path, const DisparityImage& map,
                       const SegmentationMask& mask);

/// Log-scaled vote counts as an 8-bit grayscale PNG (rows x bins).
void write_vdisparity_png(const std::string& path, const VDisparityHistogram& hist);

std::string vdisparity_to_csv(const VDisparityHistogram& hist);
std::string path_to_csv(const OptimalPath& path);
std::string curve_to_csv(const std::vector<std::pair<double, double>>& curve);

/// Run-length encoded mask: alternating run lengths starting with non-road.
std::string mask_to_rle_json(const SegmentationMask& mask);

/// Writes text via a temp file renamed into place.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace roadseg
