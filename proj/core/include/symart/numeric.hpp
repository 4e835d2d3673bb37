#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <variant>
#include <vector>

namespace symart {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Value returned wherever a function has a pole or is otherwise undefined.
/// The renderer maps it to the out-of-range colour instead of indexing with it.
inline Complex nonfinite_marker() {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  return {nan, nan};
}

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Number-theoretic remainder: the representative of x modulo period in [0, period).
double positive_mod(double x, double period);

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend constexpr bool operator==(Rgb, Rgb) = default;
};

inline constexpr Rgb kBlack{0, 0, 0};

class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, Rgb fill = kBlack);
  RasterImage(int width, int height, std::vector<Rgb> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }

  Rgb& at(int row, int col) { return pixels_[index(row, col)]; }
  Rgb at(int row, int col) const { return pixels_[index(row, col)]; }

  std::span<Rgb> row(int r) { return {pixels_.data() + index(r, 0), static_cast<std::size_t>(width_)}; }
  std::span<const Rgb> row(int r) const {
    return {pixels_.data() + index(r, 0), static_cast<std::size_t>(width_)};
  }

  std::span<const Rgb> pixels() const { return pixels_; }

  /// Tightly packed RGB bytes, row-major.
  std::vector<std::uint8_t> rgb_bytes() const;

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<Rgb> pixels_;
};

/// A raster image identified with the square window [-scale, scale]^2 of the
/// complex plane. Row index is driven by Re w and column index by Im w:
///   p = center_row + round(Re w / xinc),  q = center_col + round(Im w / yinc)
/// with xinc = 2*scale/rows and yinc = 2*scale/cols.
class ColorMap {
 public:
  static constexpr double kDefaultScale = 10.0;

  explicit ColorMap(RasterImage image, double scale_factor = kDefaultScale);

  const RasterImage& image() const { return image_; }
  double scale_factor() const { return scale_factor_; }
  int center_row() const { return center_row_; }
  int center_col() const { return center_col_; }
  double xinc() const { return xinc_; }
  double yinc() const { return yinc_; }

  /// Lower edges of the region of w that rounds onto the image.
  double lower_u() const { return (-center_row_ - 0.5) * xinc_; }
  double lower_v() const { return (-center_col_ - 0.5) * yinc_; }

 private:
  RasterImage image_;
  double scale_factor_;
  int center_row_;
  int center_col_;
  double xinc_;
  double yinc_;
};

struct BlackPolicy {
  friend constexpr bool operator==(BlackPolicy, BlackPolicy) = default;
};

/// Reduce w modulo (period_u, period_v), measured from the colour map's lower
/// window corner, before indexing.
struct WrapPolicy {
  double period_u = 0.0;
  double period_v = 0.0;
  friend constexpr bool operator==(WrapPolicy, WrapPolicy) = default;
};

struct ClampPolicy {
  friend constexpr bool operator==(ClampPolicy, ClampPolicy) = default;
};

using OutOfRangePolicy = std::variant<BlackPolicy, WrapPolicy, ClampPolicy>;

/// Throws std::invalid_argument when the policy parameters are unusable.
void validate_policy(const OutOfRangePolicy& policy);

struct PixelIndex {
  int row = 0;
  int col = 0;
  friend constexpr bool operator==(PixelIndex, PixelIndex) = default;
};

/// Colour-map indices for w before any policy is applied, kept in double so
/// huge |w| cannot overflow.
struct RawIndex {
  double row = 0.0;
  double col = 0.0;
};
RawIndex raw_colormap_index(Complex w, const ColorMap& cmap);

Rgb sample_colormap(Complex w, const ColorMap& cmap, const OutOfRangePolicy& policy);

}  // namespace symart
