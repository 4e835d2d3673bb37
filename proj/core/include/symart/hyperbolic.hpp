#pragma once

#include <span>
#include <variant>
#include <vector>

#include "symart/numeric.hpp"

namespace symart {

/// z -> (a z + b) / (c z + d) with real coefficients, stored scaled to
/// ad - bc = 1 with c > 0, or c == 0 and a > 0.
class MobiusReal {
 public:
  /// Throws std::invalid_argument unless ad - bc > 0 and all entries are finite.
  MobiusReal(double a, double b, double c, double d);

  static MobiusReal identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static MobiusReal translation(double u) { return {1.0, u, 0.0, 1.0}; }
  static MobiusReal scaling(double rho) { return {rho, 0.0, 0.0, 1.0}; }
  static MobiusReal inversion() { return {0.0, -1.0, 1.0, 0.0}; }

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }

  Complex operator()(Complex z) const { return (a_ * z + b_) / (c_ * z + d_); }
  MobiusReal inverse() const { return {d_, -b_, -c_, a_}; }

 private:
  double a_, b_, c_, d_;
};

inline Complex mobius_apply(const MobiusReal& m, Complex z) { return m(z); }

/// The map z -> m1(m2(z)).
MobiusReal mobius_compose(const MobiusReal& m1, const MobiusReal& m2);

/// Entry-wise comparison of the normalized matrices, up to an overall sign.
bool approx_equal(const MobiusReal& x, const MobiusReal& y, double tol);

struct Translate {
  double u = 0.0;
};
struct Scale {
  double rho = 1.0;
};
struct Invert {};
using SpecialMap = std::variant<Translate, Scale, Invert>;

MobiusReal to_mobius(const SpecialMap& s);

/// Factorisation into translations, scalings and the inversion -1/z.
/// The word is written left to right as a composition, so its last map acts first:
///   c != 0  [Translate(a/c), Scale(1/c^2), Invert, Translate(d/c)]
///   c == 0  [Scale(a^2), Translate(b/a)]
std::vector<SpecialMap> special_word(const MobiusReal& m);
MobiusReal compose_word(const std::vector<SpecialMap>& word);

/// Distance in the upper half-plane, 2 atanh(|z - w| / |z - conj w|).
double hyperbolic_distance(Complex z, Complex w);

/// Polyline approximation of the length integral: each segment's Euclidean
/// length divided by the geometric mean of its endpoint heights.
double curve_length(std::span<const Complex> points);

/// Hyperbolic area of [x0, x1] x [y0, y1].
double rect_area(double x0, double x1, double y0, double y1);

struct Ray {
  double u = 0.0;
  friend bool operator==(const Ray&, const Ray&) = default;
};
struct Semicircle {
  double r = 1.0;
  double u = 0.0;
  friend bool operator==(const Semicircle&, const Semicircle&) = default;
};
using Geodesic = std::variant<Ray, Semicircle>;

/// The unique geodesic through two distinct points of the upper half-plane.
Geodesic geodesic_through(Complex z1, Complex z2);

/// Euclidean distance from z to the geodesic's locus.
double geodesic_residual(const Geodesic& g, Complex z);
bool approx_equal(const Geodesic& x, const Geodesic& y, double tol = 1e-9);

/// Circle of radius r tangent to the real axis at u (centre (u, r)).
struct Horocycle {
  double r = 1.0;
  double u = 0.0;
  friend bool operator==(const Horocycle&, const Horocycle&) = default;
};

struct EuclideanCircle {
  Complex center;
  double radius = 0.0;
  friend bool operator==(const EuclideanCircle&, const EuclideanCircle&) = default;
};

/// Locus of points at hyperbolic distance rho from center:
/// Euclidean centre x + i y cosh(rho), radius y sinh(rho).
EuclideanCircle hyperbolic_circle(Complex center, double rho);

/// (i z + 1) / (z + i), the upper half-plane onto the unit disc.
Complex cayley_to_disk(Complex z);
/// (w + i) / (i w + 1)
Complex cayley_from_disk(Complex w);

}  // namespace symart
