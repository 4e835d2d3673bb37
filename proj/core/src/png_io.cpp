#include "symart/png_io.hpp"

#include <png.h>
#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <csetjmp>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

namespace symart {

namespace {

// libpng reports errors by longjmp; the message is stashed in the error pointer
// so the caller can rethrow it as an exception once control is back in C++.
struct ErrorSlot {
  char message[256] = "unknown libpng error";
};

[[noreturn]] void png_error_handler(png_structp png, png_const_charp message) {
  auto* slot = static_cast<ErrorSlot*>(png_get_error_ptr(png));
  if (slot) std::snprintf(slot->message, sizeof(slot->message), "%s", message);
  png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

struct ReadCursor {
  std::span<const std::uint8_t> bytes;
  std::size_t offset = 0;
};

void read_from_cursor(png_structp png, png_bytep out, png_size_t length) {
  auto* cursor = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cursor->offset + length > cursor->bytes.size()) {
    png_error(png, "unexpected end of data");
  }
  std::memcpy(out, cursor->bytes.data() + cursor->offset, length);
  cursor->offset += length;
}

void write_to_vector(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

void flush_noop(png_structp) {}

std::uint8_t to_byte(double v) {
  v = std::round(v);
  if (v < 0.0) return 0;
  if (v > 255.0) return 255;
  return static_cast<std::uint8_t>(v);
}

Rgb hsv_to_rgb(double h, double s, double v) {
  h = positive_mod(h, 1.0) * 6.0;
  const int sector = static_cast<int>(h) % 6;
  const double f = h - std::floor(h);
  const double p = v * (1.0 - s);
  const double q = v * (1.0 - s * f);
  const double t = v * (1.0 - s * (1.0 - f));
  double r = 0, g = 0, b = 0;
  switch (sector) {
    case 0: r = v, g = t, b = p; break;
    case 1: r = q, g = v, b = p; break;
    case 2: r = p, g = v, b = t; break;
    case 3: r = p, g = q, b = v; break;
    case 4: r = t, g = p, b = v; break;
    default: r = v, g = p, b = q; break;
  }
  return {to_byte(255.0 * r), to_byte(255.0 * g), to_byte(255.0 * b)};
}

}  // namespace

RasterImage decode_png(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw std::runtime_error("png: not a PNG stream");
  }
  ErrorSlot slot;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &slot, png_error_handler,
                                           png_warning_handler);
  if (!png) throw std::runtime_error("png: cannot allocate read struct");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("png: cannot allocate info struct");
  }

  // Everything with a destructor lives outside the setjmp region.
  ReadCursor cursor{bytes, 0};
  std::vector<std::uint8_t> raw;
  std::vector<png_bytep> rows;
  int width = 0;
  int height = 0;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error(std::string("png: ") + slot.message);
  }

  png_set_read_fn(png, &cursor, read_from_cursor);
  png_read_info(png, info);

  const png_byte color_type = png_get_color_type(png, info);
  const png_byte bit_depth = png_get_bit_depth(png, info);
  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  width = static_cast<int>(png_get_image_width(png, info));
  height = static_cast<int>(png_get_image_height(png, info));
  if (png_get_rowbytes(png, info) != static_cast<std::size_t>(width) * 3) {
    png_error(png, "unexpected row layout after transforms");
  }

  raw.resize(static_cast<std::size_t>(width) * 3 * static_cast<std::size_t>(height));
  rows.resize(static_cast<std::size_t>(height));
  for (int r = 0; r < height; ++r) rows[r] = raw.data() + static_cast<std::size_t>(width) * 3 * r;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  std::vector<Rgb> pixels(static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    pixels[i] = {raw[3 * i], raw[3 * i + 1], raw[3 * i + 2]};
  }
  return RasterImage(width, height, std::move(pixels));
}

RasterImage read_png(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_png(bytes);
}

std::vector<std::uint8_t> encode_png(const RasterImage& image) {
  if (image.empty()) throw std::invalid_argument("png: cannot encode an empty image");
  ErrorSlot slot;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &slot, png_error_handler,
                                            png_warning_handler);
  if (!png) throw std::runtime_error("png: cannot allocate write struct");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("png: cannot allocate info struct");
  }

  std::vector<std::uint8_t> out;
  std::vector<std::uint8_t> row(static_cast<std::size_t>(image.width()) * 3);

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error(std::string("png: ") + slot.message);
  }

  png_set_write_fn(png, &out, write_to_vector, flush_noop);
  png_set_compression_level(png, 6);
  png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_SUB);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width()), static_cast<png_uint_32>(image.height()), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  for (int r = 0; r < image.height(); ++r) {
    const auto src = image.row(r);
    for (std::size_t c = 0; c < src.size(); ++c) {
      row[3 * c] = src[c].r;
      row[3 * c + 1] = src[c].g;
      row[3 * c + 2] = src[c].b;
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

void write_png(const std::filesystem::path& path, const RasterImage& image) {
  const auto bytes = encode_png(image);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::optional<RasterImage> builtin_colormap(std::string_view name, int size) {
  if (size < 2) throw std::invalid_argument("builtin colour map size must be at least 2");
  RasterImage img(size, size);
  const double half = size / 2.0;
  if (name == "smooth") {
    for (int r = 0; r < size; ++r) {
      for (int c = 0; c < size; ++c) {
        const double u = (r + 0.5) / size;
        const double v = (c + 0.5) / size;
        img.at(r, c) = {to_byte(127.5 + 127.5 * std::cos(kTwoPi * u)),
                        to_byte(127.5 + 127.5 * std::sin(kTwoPi * v)),
                        to_byte(127.5 + 127.5 * std::cos(kTwoPi * (u + v)))};
      }
    }
    return img;
  }
  if (name == "wheel") {
    for (int r = 0; r < size; ++r) {
      for (int c = 0; c < size; ++c) {
        // Row follows Re w, column follows Im w, matching the sampling rule.
        const double x = (r + 0.5 - half) / half;
        const double y = (c + 0.5 - half) / half;
        const double radius = std::hypot(x, y);
        const double hue = std::atan2(y, x) / kTwoPi;
        const double value = 1.0 - std::exp(-3.0 * radius);
        const double sat = radius > 1.0 ? std::max(0.0, 2.0 - radius) : 1.0;
        img.at(r, c) = hsv_to_rgb(hue, sat, value);
      }
    }
    return img;
  }
  if (name == "checker") {
    const int cell = std::max(1, size / 8);
    for (int r = 0; r < size; ++r) {
      for (int c = 0; c < size; ++c) {
        const bool dark = ((r / cell) + (c / cell)) % 2 == 0;
        img.at(r, c) = dark ? Rgb{32, 48, 96} : Rgb{240, 200, 80};
      }
    }
    return img;
  }
  return std::nullopt;
}

std::vector<std::string> builtin_colormap_names() { return {"smooth", "wheel", "checker"}; }

std::string pixel_digest(const RasterImage& image) {
  const auto bytes = image.rgb_bytes();
  const std::string header =
      std::to_string(image.width()) + "x" + std::to_string(image.height()) + ":";

  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw std::runtime_error("sha256: cannot allocate context");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                  EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, digest.data(), &length) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw std::runtime_error("sha256: digest failed");

  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xF]);
  }
  return hex;
}

}  // namespace symart
