#include <cmath>
#include <stdexcept>

#include "symart/render.hpp"

namespace symart {

namespace {

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

double distance_to_family(double coord, double spacing) { return std::fabs(coord - std::round(coord)) * spacing; }

}  // namespace

double distance_to_locus(const OverlayShape& shape, Complex z) {
  struct Visitor {
    Complex z;
    double operator()(const Ray& g) const {
      if (z.imag() >= 0.0) return std::fabs(z.real() - g.u);
      return std::abs(z - Complex{g.u, 0.0});
    }
    double operator()(const Semicircle& g) const {
      if (z.imag() >= 0.0) return std::fabs(std::abs(z - g.u) - g.r);
      return std::min(std::abs(z - Complex{g.u - g.r, 0.0}), std::abs(z - Complex{g.u + g.r, 0.0}));
    }
    double operator()(const Horocycle& h) const { return std::fabs(std::abs(z - Complex{h.u, h.r}) - h.r); }
    double operator()(const EuclideanCircle& c) const { return std::fabs(std::abs(z - c.center) - c.radius); }
    double operator()(const VerticalLine& v) const { return std::fabs(z.real() - v.u); }
    double operator()(const LatticeGrid& g) const {
      const double area = cross(g.u, g.v);
      if (area == 0.0) throw std::invalid_argument("lattice grid: basis vectors are parallel");
      // z = a u + b v
      const double a = cross(z, g.v) / area;
      const double b = cross(g.u, z) / area;
      const double da = distance_to_family(a, std::fabs(area) / std::abs(g.v));
      const double db = distance_to_family(b, std::fabs(area) / std::abs(g.u));
      return std::min(da, db);
    }
  };
  return std::visit(Visitor{z}, shape);
}

RasterImage draw_overlays(RasterImage img, const Window& window, const std::vector<Overlay>& overlays) {
  validate_window(window);
  if (img.width() != window.width || img.height() != window.height) {
    throw std::invalid_argument("draw_overlays: image size does not match the window");
  }
  const double unit = std::min(window.dx(), window.dy());
  for (const auto& ov : overlays) {
    if (!(ov.stroke >= 1.0)) throw std::invalid_argument("draw_overlays: stroke must be >= 1 pixel");
    const double reach = 0.5 * ov.stroke;
    for (int r = 0; r < img.height(); ++r) {
      auto row = img.row(r);
      for (int c = 0; c < img.width(); ++c) {
        const double d = distance_to_locus(ov.shape, pixel_center(window, r, c)) / unit;
        if (d <= reach) row[c] = ov.color;
      }
    }
  }
  return img;
}

}  // namespace symart
