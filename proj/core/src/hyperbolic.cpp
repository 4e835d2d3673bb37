#include "symart/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace symart {

MobiusReal::MobiusReal(double a, double b, double c, double d) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d)) {
    throw std::invalid_argument("MobiusReal: non-finite coefficient");
  }
  const double det = a * d - b * c;
  if (!(det > 0.0)) throw std::invalid_argument("MobiusReal: determinant must be positive");
  double s = 1.0 / std::sqrt(det);
  if (c < 0.0 || (c == 0.0 && a < 0.0)) s = -s;
  a_ = a * s;
  b_ = b * s;
  c_ = c * s;
  d_ = d * s;
}

MobiusReal mobius_compose(const MobiusReal& x, const MobiusReal& y) {
  return {x.a() * y.a() + x.b() * y.c(), x.a() * y.b() + x.b() * y.d(), x.c() * y.a() + x.d() * y.c(),
          x.c() * y.b() + x.d() * y.d()};
}

bool approx_equal(const MobiusReal& x, const MobiusReal& y, double tol) {
  // Rounding can push c across zero and flip the normalized sign, so accept either sign.
  const auto close = [&](double s) {
    return std::fabs(x.a() - s * y.a()) <= tol && std::fabs(x.b() - s * y.b()) <= tol &&
           std::fabs(x.c() - s * y.c()) <= tol && std::fabs(x.d() - s * y.d()) <= tol;
  };
  return close(1.0) || close(-1.0);
}

MobiusReal to_mobius(const SpecialMap& s) {
  struct Visitor {
    MobiusReal operator()(const Translate& t) const { return MobiusReal::translation(t.u); }
    MobiusReal operator()(const Scale& sc) const { return MobiusReal::scaling(sc.rho); }
    MobiusReal operator()(const Invert&) const { return MobiusReal::inversion(); }
  };
  return std::visit(Visitor{}, s);
}

std::vector<SpecialMap> special_word(const MobiusReal& m) {
  if (m.c() != 0.0) {
    return {Translate{m.a() / m.c()}, Scale{1.0 / (m.c() * m.c())}, Invert{}, Translate{m.d() / m.c()}};
  }
  return {Scale{m.a() * m.a()}, Translate{m.b() / m.a()}};
}

MobiusReal compose_word(const std::vector<SpecialMap>& word) {
  MobiusReal acc = MobiusReal::identity();
  for (const auto& s : word) acc = mobius_compose(acc, to_mobius(s));
  return acc;
}

double hyperbolic_distance(Complex z, Complex w) {
  // 2 atanh(|z - w| / |z - conj w|), rewritten so large distances keep full precision.
  const double num = std::abs(z - w);
  const double den = std::abs(z - std::conj(w));
  return std::max(0.0, 2.0 * std::log((num + den) / (2.0 * std::sqrt(z.imag() * w.imag()))));
}

double curve_length(std::span<const Complex> points) {
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double h = std::sqrt(points[i - 1].imag() * points[i].imag());
    total += std::abs(points[i] - points[i - 1]) / h;
  }
  return total;
}

double rect_area(double x0, double x1, double y0, double y1) {
  if (x1 < x0 || !(y0 > 0.0) || y1 < y0) throw std::invalid_argument("rect_area: need x1 >= x0 and y1 >= y0 > 0");
  return (x1 - x0) * (1.0 / y0 - 1.0 / y1);
}

Geodesic geodesic_through(Complex z1, Complex z2) {
  if (z1 == z2) throw std::invalid_argument("geodesic_through: points must be distinct");
  const double x1 = z1.real();
  const double x2 = z2.real();
  if (x1 == x2) return Ray{x1};
  const double u = (std::norm(z2) - std::norm(z1)) / (2.0 * (x2 - x1));
  return Semicircle{std::abs(z1 - u), u};
}

double geodesic_residual(const Geodesic& g, Complex z) {
  if (const auto* ray = std::get_if<Ray>(&g)) return std::fabs(z.real() - ray->u);
  const auto& s = std::get<Semicircle>(g);
  return std::fabs(std::abs(z - s.u) - s.r);
}

bool approx_equal(const Geodesic& x, const Geodesic& y, double tol) {
  if (x.index() != y.index()) return false;
  if (const auto* rx = std::get_if<Ray>(&x)) return std::fabs(rx->u - std::get<Ray>(y).u) <= tol;
  const auto& sx = std::get<Semicircle>(x);
  const auto& sy = std::get<Semicircle>(y);
  return std::fabs(sx.r - sy.r) <= tol && std::fabs(sx.u - sy.u) <= tol;
}

EuclideanCircle hyperbolic_circle(Complex center, double rho) {
  if (!(center.imag() > 0.0)) throw std::invalid_argument("hyperbolic_circle: centre must lie in H");
  if (!(rho > 0.0)) throw std::invalid_argument("hyperbolic_circle: radius must be positive");
  const double y = center.imag();
  return {{center.real(), y * std::cosh(rho)}, y * std::sinh(rho)};
}

Complex cayley_to_disk(Complex z) {
  const Complex i{0.0, 1.0};
  return (i * z + 1.0) / (z + i);
}

Complex cayley_from_disk(Complex w) {
  const Complex i{0.0, 1.0};
  return (w + i) / (i * w + 1.0);
}

}  // namespace symart
