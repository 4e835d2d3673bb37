#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symart/numeric.hpp"

namespace symart {

/// Decodes any PNG libpng understands into 8-bit RGB. Alpha is discarded,
/// palette and grey images are expanded, 16-bit channels are stripped.
RasterImage read_png(const std::filesystem::path& path);
RasterImage decode_png(std::span<const std::uint8_t> bytes);

/// 8-bit RGB, no interlacing, fixed zlib level and filter, no time chunk.
std::vector<std::uint8_t> encode_png(const RasterImage& image);

/// Writes through a temporary file in the same directory and renames it into
/// place, so readers never observe a partial file.
void write_png(const std::filesystem::path& path, const RasterImage& image);

/// Procedural colour maps usable as `builtin:<name>` in design files.
///   smooth  - periodic cosine ramps, gentle gradients everywhere
///   wheel   - hue by argument, brightness by radius (classic colour wheel)
///   checker - two-tone checkerboard with 8x8 cells, handy for seeing lattices
std::optional<RasterImage> builtin_colormap(std::string_view name, int size = 512);
std::vector<std::string> builtin_colormap_names();

/// Hex SHA-256 of the packed RGB buffer prefixed with the dimensions.
std::string pixel_digest(const RasterImage& image);

}  // namespace symart
