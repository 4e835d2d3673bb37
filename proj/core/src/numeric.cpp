#include "symart/numeric.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace symart {

double positive_mod(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  // r + period can round up to exactly period for tiny negative r.
  if (r >= period) r = 0.0;
  return r;
}

RasterImage::RasterImage(int width, int height, Rgb fill)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) throw std::invalid_argument("RasterImage: negative dimensions");
  pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

RasterImage::RasterImage(int width, int height, std::vector<Rgb> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width < 0 || height < 0) throw std::invalid_argument("RasterImage: negative dimensions");
  if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("RasterImage: pixel count does not match width*height");
  }
}

std::vector<std::uint8_t> RasterImage::rgb_bytes() const {
  std::vector<std::uint8_t> out;
  out.reserve(pixels_.size() * 3);
  for (Rgb p : pixels_) {
    out.push_back(p.r);
    out.push_back(p.g);
    out.push_back(p.b);
  }
  return out;
}

ColorMap::ColorMap(RasterImage image, double scale_factor)
    : image_(std::move(image)), scale_factor_(scale_factor) {
  if (image_.empty()) throw std::invalid_argument("ColorMap: empty image");
  if (!(scale_factor > 0.0) || !std::isfinite(scale_factor)) {
    throw std::invalid_argument("ColorMap: scale_factor must be positive and finite");
  }
  const int rows = image_.height();
  const int cols = image_.width();
  center_row_ = rows / 2;
  center_col_ = cols / 2;
  xinc_ = (2.0 * scale_factor_) / rows;
  yinc_ = (2.0 * scale_factor_) / cols;
}

void validate_policy(const OutOfRangePolicy& policy) {
  if (const auto* wrap = std::get_if<WrapPolicy>(&policy)) {
    if (!(wrap->period_u > 0.0) || !(wrap->period_v > 0.0) || !std::isfinite(wrap->period_u) ||
        !std::isfinite(wrap->period_v)) {
      throw std::invalid_argument("wrap periods must be positive and finite");
    }
  }
}

RawIndex raw_colormap_index(Complex w, const ColorMap& cmap) {
  // std::round rounds half away from zero on every platform.
  return {cmap.center_row() + std::round(w.real() / cmap.xinc()),
          cmap.center_col() + std::round(w.imag() / cmap.yinc())};
}

namespace {

bool in_range(double idx, int size) { return idx >= 0.0 && idx < static_cast<double>(size); }

double clamp_index(double idx, int size) {
  if (idx < 0.0) return 0.0;
  if (idx > size - 1) return size - 1;
  return idx;
}

}  // namespace

Rgb sample_colormap(Complex w, const ColorMap& cmap, const OutOfRangePolicy& policy) {
  if (!is_finite(w)) return kBlack;
  const int rows = cmap.image().height();
  const int cols = cmap.image().width();

  if (std::holds_alternative<WrapPolicy>(policy)) {
    const auto& wrap = std::get<WrapPolicy>(policy);
    const double lo_u = cmap.lower_u();
    const double lo_v = cmap.lower_v();
    const Complex reduced{lo_u + positive_mod(w.real() - lo_u, wrap.period_u),
                          lo_v + positive_mod(w.imag() - lo_v, wrap.period_v)};
    RawIndex idx = raw_colormap_index(reduced, cmap);
    // Rounding at the seam may land one index past either edge.
    if (idx.row >= -1.0 && idx.row <= rows) idx.row = clamp_index(idx.row, rows);
    if (idx.col >= -1.0 && idx.col <= cols) idx.col = clamp_index(idx.col, cols);
    if (!in_range(idx.row, rows) || !in_range(idx.col, cols)) return kBlack;
    return cmap.image().at(static_cast<int>(idx.row), static_cast<int>(idx.col));
  }

  RawIndex idx = raw_colormap_index(w, cmap);
  if (in_range(idx.row, rows) && in_range(idx.col, cols)) {
    return cmap.image().at(static_cast<int>(idx.row), static_cast<int>(idx.col));
  }
  if (std::holds_alternative<ClampPolicy>(policy)) {
    return cmap.image().at(static_cast<int>(clamp_index(idx.row, rows)),
                           static_cast<int>(clamp_index(idx.col, cols)));
  }
  return kBlack;
}

}  // namespace symart
