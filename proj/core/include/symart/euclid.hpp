#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "symart/expr.hpp"

namespace symart {

/// (x mod width) + i (y mod height) with representatives in [0, period).
Complex lattice_wrap(Complex z, double width, double height);

/// a * z^m * conj(z)^n
struct RosetteTerm {
  Complex a;
  int m = 0;
  int n = 0;
  friend bool operator==(const RosetteTerm&, const RosetteTerm&) = default;
};

/// Sum of the terms as an expression. Every term must satisfy
/// (m - n) % p == 0. With mirror_x each term (a, m, n) also contributes
/// (a, n, m), so f(conj z) == f(z); a term with m == n is its own partner.
Expr build_rosette(int p, const std::vector<RosetteTerm>& terms, bool mirror_x);

enum class Pairing { None, ReflectX, PointPair };

struct WallpaperTerm {
  Complex a;
  int m = 0;
  int n = 0;
  Pairing pairing = Pairing::None;
  friend bool operator==(const WallpaperTerm&, const WallpaperTerm&) = default;
};

/// a * W_{m1,n1} * W_{m2,n2} * ...
struct WallpaperProduct {
  Complex a;
  std::vector<std::pair<int, int>> factors;
  friend bool operator==(const WallpaperProduct&, const WallpaperProduct&) = default;
};

struct WallpaperFunction {
  Expr expr;
  EvalEnv env;
};

/// Linear combination of group averages for a wallpaper of rotation order
/// 2, 3, 4 or 6. Orders 2 and 4 use the square lattice, 3 and 6 the rhombic
/// one (order 6 being 3-fold averages with every term point-paired).
///
/// Partner expansion for ReflectX:
///   order 4     W_{m,n} + W_{-n,-m}
///   order 3, 6  W_{m,n} + W_{n,m}
///   order 2     W_{m,n} + W_{m,-n}
/// PointPair adds W_{-m,-n} (and the negated partner for order 6 ReflectX).
WallpaperFunction build_wallpaper(int order, const std::vector<WallpaperTerm>& terms,
                                  const std::vector<WallpaperProduct>& products = {});

struct Rotation {
  double angle = 0.0;
  Complex center{0.0, 0.0};
};
struct Translation {
  Complex offset;
};
struct Conjugation {};
struct Negation {};
using PlaneTransform = std::variant<Rotation, Translation, Conjugation, Negation>;

Complex apply_transform(const PlaneTransform& t, Complex z);

struct Disc {
  double radius = 1.0;
};
struct Annulus {
  double inner = 0.5;
  double outer = 2.0;
};
struct Box {
  Complex lo{-1.0, -1.0};
  Complex hi{1.0, 1.0};
};
using SampleRegion = std::variant<Disc, Annulus, Box>;

struct SymmetryCheck {
  int samples = 10000;
  SampleRegion region = Disc{};
  std::uint64_t seed = 0x5eed;
};

/// max |f(S z) - f(z)| over seeded random points of the region, ignoring
/// points where either value is non-finite.
double check_symmetry(const Expr& f, const EvalEnv& env, const PlaneTransform& transform,
                      const SymmetryCheck& check = {});

/// True iff 2 cos(2 pi / n) is within 1e-12 of an integer.
bool is_crystallographic(int n);

/// Coefficient tables for the shipped example designs.
namespace presets {

/// (1+i) + (i/4) z^6 + z^-6, fold 6, no mirror.
std::vector<RosetteTerm> six_fold_rosette();
/// 5-fold mirror-symmetric rosette; the printed (-6,-4) exponent pair is
/// replaced by (-6,4), the mirror partner of (4,-6).
std::vector<RosetteTerm> five_fold_mirror_rosette();
/// Square-lattice 4-fold design with x-axis reflection pairs.
std::vector<WallpaperTerm> four_fold_wallpaper();
/// The same indices without grouping, as 2-fold averages.
std::vector<WallpaperTerm> two_fold_wallpaper();
/// 2 W_{2,3} W_{1,4} + W_{1,0} on the rhombic lattice.
std::vector<WallpaperTerm> three_fold_terms();
std::vector<WallpaperProduct> three_fold_products();
/// Reflection-paired 6-fold design. The coefficients a = 1, b = 0.5i,
/// c = 0.25 are placeholders; no values are published for them.
std::vector<WallpaperTerm> six_fold_wallpaper();

}  // namespace presets

}  // namespace symart
