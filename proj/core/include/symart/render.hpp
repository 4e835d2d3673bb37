#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "symart/hyperbolic.hpp"
#include "symart/numeric.hpp"

namespace symart {

/// Rectangle of the plane sampled at pixel centres. Column c and row r map to
///   x = x_min + (c + 0.5) dx,  y = y_max - (r + 0.5) dy
/// so row 0 is the top edge and y grows upward on screen.
struct Window {
  double x_min = -1.0;
  double x_max = 1.0;
  double y_min = -1.0;
  double y_max = 1.0;
  int width = 1;
  int height = 1;

  double dx() const { return (x_max - x_min) / width; }
  double dy() const { return (y_max - y_min) / height; }
  friend bool operator==(const Window&, const Window&) = default;
};

/// Throws std::invalid_argument on an empty or inverted window; with
/// upper_half_plane also when y_min <= 0.
void validate_window(const Window& w, bool upper_half_plane = false);

/// Sample point of a pixel. With upper_half_plane the height is kept at
/// least half a pixel above the real axis.
Complex pixel_center(const Window& w, int row, int col, bool upper_half_plane = false);

/// The pixel whose centre is nearest z; ties go to the lower index.
std::optional<PixelIndex> pixel_of(const Window& w, Complex z);

using PlaneFunction = std::function<Complex(Complex)>;

struct RenderOptions {
  /// 0 picks std::thread::hardware_concurrency().
  int workers = 0;
  bool upper_half_plane = false;
};

/// Domain colouring: each pixel gets sample_colormap(f(pixel centre)).
/// Rows are handed to workers dynamically; the result does not depend on
/// the worker count.
RasterImage render(const PlaneFunction& f, const Window& window, const ColorMap& cmap,
                   const OutOfRangePolicy& policy, const RenderOptions& options = {});

struct VerticalLine {
  double u = 0.0;
  friend bool operator==(const VerticalLine&, const VerticalLine&) = default;
};
/// Lines through the integer multiples of u parallel to v, and vice versa.
struct LatticeGrid {
  Complex u{1.0, 0.0};
  Complex v{0.0, 1.0};
  friend bool operator==(const LatticeGrid&, const LatticeGrid&) = default;
};

using OverlayShape = std::variant<Ray, Semicircle, Horocycle, EuclideanCircle, VerticalLine, LatticeGrid>;

struct Overlay {
  OverlayShape shape;
  Rgb color{255, 221, 0};
  double stroke = 1.0;  // pixels
  friend bool operator==(const Overlay&, const Overlay&) = default;
};

/// Euclidean distance from z to the shape's locus, in plane units.
double distance_to_locus(const OverlayShape& shape, Complex z);

/// Paints every pixel whose centre lies within stroke/2 pixels of the locus,
/// in list order, without anti-aliasing.
RasterImage draw_overlays(RasterImage img, const Window& window, const std::vector<Overlay>& overlays);

/// Fraction of pixels that differ (some channel by more than tolerance) from
/// the pixel the rotation about center_px carries them to. Pixel (r, c) has
/// centre (c + 0.5, r + 0.5); lookups use the pixel containing the rotated
/// point and pixels rotated out of frame are skipped. Requires a square image.
double image_rotation_residual(const RasterImage& img, double angle, std::optional<std::pair<double, double>> center_px = {},
                               int tolerance = 8);

}  // namespace symart
