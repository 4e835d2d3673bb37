#include "symart/euclid.hpp"

#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

namespace symart {

Complex lattice_wrap(Complex z, double width, double height) {
  if (!(width > 0.0) || !(height > 0.0)) throw std::invalid_argument("lattice_wrap: periods must be positive");
  return {positive_mod(z.real(), width), positive_mod(z.imag(), height)};
}

namespace {

Expr scaled(Complex a, std::optional<Expr> body) {
  if (!body) return Expr::constant(a);
  if (a == Complex{1.0, 0.0}) return *body;
  return Expr::mul(Expr::constant(a), *body);
}

std::optional<Expr> monomial(int m, int n) {
  std::optional<Expr> out;
  if (m != 0) out = Expr::pow(Expr::var(), m);
  if (n != 0) {
    Expr bar = Expr::pow(Expr::conj(Expr::var()), n);
    out = out ? Expr::mul(*out, bar) : bar;
  }
  return out;
}

void append(std::optional<Expr>& acc, Expr e) { acc = acc ? Expr::add(*acc, std::move(e)) : std::move(e); }

std::string pair_text(int m, int n) { return "(" + std::to_string(m) + "," + std::to_string(n) + ")"; }

}  // namespace

Expr build_rosette(int p, const std::vector<RosetteTerm>& terms, bool mirror_x) {
  if (p < 1) throw std::invalid_argument("build_rosette: fold order must be >= 1");
  if (terms.empty()) throw std::invalid_argument("build_rosette: no terms");
  std::optional<Expr> sum;
  for (const auto& t : terms) {
    if ((static_cast<long long>(t.m) - t.n) % p != 0) {
      throw std::invalid_argument("build_rosette: term " + pair_text(t.m, t.n) + " violates m = n (mod " +
                                  std::to_string(p) + ")");
    }
    if (mirror_x && t.m != t.n) {
      std::optional<Expr> pair = monomial(t.m, t.n);
      append(pair, *monomial(t.n, t.m));
      append(sum, scaled(t.a, pair));
    } else {
      append(sum, scaled(t.a, monomial(t.m, t.n)));
    }
  }
  return *sum;
}

WallpaperFunction build_wallpaper(int order, const std::vector<WallpaperTerm>& terms,
                                  const std::vector<WallpaperProduct>& products) {
  if (order != 2 && order != 3 && order != 4 && order != 6) {
    throw std::invalid_argument("build_wallpaper: order must be 2, 3, 4 or 6, got " + std::to_string(order));
  }
  if (terms.empty() && products.empty()) throw std::invalid_argument("build_wallpaper: no terms");

  const int avg_order = order == 6 ? 3 : order;
  const Lattice lattice = (order == 3 || order == 6) ? Lattice::Rhombic : Lattice::Square;
  auto w = [&](int m, int n) { return Expr::group_avg(avg_order, m, n); };

  std::optional<Expr> sum;
  for (const auto& t : terms) {
    std::vector<std::pair<int, int>> indices{{t.m, t.n}};
    if (t.pairing == Pairing::ReflectX) {
      switch (order) {
        case 4: indices.emplace_back(-t.n, -t.m); break;
        case 2: indices.emplace_back(t.m, -t.n); break;
        default: indices.emplace_back(t.n, t.m); break;
      }
    }
    if (t.pairing == Pairing::PointPair || order == 6) {
      const std::size_t base = indices.size();
      for (std::size_t i = 0; i < base; ++i) indices.emplace_back(-indices[i].first, -indices[i].second);
    }
    std::optional<Expr> group;
    for (const auto& [m, n] : indices) append(group, w(m, n));
    append(sum, scaled(t.a, group));
  }

  for (const auto& prod : products) {
    if (prod.factors.empty()) throw std::invalid_argument("build_wallpaper: product with no factors");
    auto product_of = [&](int sign) {
      std::optional<Expr> acc;
      for (const auto& [m, n] : prod.factors) {
        Expr f = w(sign * m, sign * n);
        acc = acc ? Expr::mul(*acc, f) : f;
      }
      return *acc;
    };
    std::optional<Expr> group = product_of(1);
    if (order == 6) append(group, product_of(-1));
    append(sum, scaled(prod.a, group));
  }
  return {*sum, EvalEnv{lattice}};
}

Complex apply_transform(const PlaneTransform& t, Complex z) {
  struct Visitor {
    Complex z;
    Complex operator()(const Rotation& r) const { return r.center + std::polar(1.0, r.angle) * (z - r.center); }
    Complex operator()(const Translation& tr) const { return z + tr.offset; }
    Complex operator()(const Conjugation&) const { return std::conj(z); }
    Complex operator()(const Negation&) const { return -z; }
  };
  return std::visit(Visitor{z}, t);
}

double check_symmetry(const Expr& f, const EvalEnv& env, const PlaneTransform& transform,
                      const SymmetryCheck& check) {
  if (check.samples < 1) throw std::invalid_argument("check_symmetry: samples must be >= 1");
  std::mt19937_64 rng(check.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const CompiledExpr g(f, env);

  auto draw = [&]() -> Complex {
    struct Visitor {
      std::mt19937_64& rng;
      std::uniform_real_distribution<double>& unit;
      Complex operator()(const Disc& d) const {
        const double r = d.radius * std::sqrt(unit(rng));
        return std::polar(r, kTwoPi * unit(rng));
      }
      Complex operator()(const Annulus& a) const {
        const double r2 = a.inner * a.inner + (a.outer * a.outer - a.inner * a.inner) * unit(rng);
        return std::polar(std::sqrt(r2), kTwoPi * unit(rng));
      }
      Complex operator()(const Box& b) const {
        const double x = b.lo.real() + (b.hi.real() - b.lo.real()) * unit(rng);
        const double y = b.lo.imag() + (b.hi.imag() - b.lo.imag()) * unit(rng);
        return {x, y};
      }
    };
    return std::visit(Visitor{rng, unit}, check.region);
  };

  double worst = 0.0;
  for (int i = 0; i < check.samples; ++i) {
    const Complex z = draw();
    const Complex fz = g(z);
    const Complex fs = g(apply_transform(transform, z));
    if (!is_finite(fz) || !is_finite(fs)) continue;
    worst = std::max(worst, std::abs(fs - fz));
  }
  return worst;
}

bool is_crystallographic(int n) {
  if (n < 1) throw std::invalid_argument("is_crystallographic: n must be >= 1");
  const double trace = 2.0 * std::cos(kTwoPi / n);
  return std::fabs(trace - std::round(trace)) <= 1e-12;
}

namespace presets {

std::vector<RosetteTerm> six_fold_rosette() {
  return {{{1.0, 1.0}, 0, 0}, {{0.0, 0.25}, 6, 0}, {{1.0, 0.0}, -6, 0}};
}

std::vector<RosetteTerm> five_fold_mirror_rosette() {
  return {{{2.0, 3.0}, 5, 0}, {{0.0, 1.0}, 6, 1}, {{0.0, 1.0 / 2000.0}, 4, -6}};
}

std::vector<WallpaperTerm> four_fold_wallpaper() {
  return {{{1.0, 0.0}, 1, 0, Pairing::ReflectX},
          {{0.5, 0.0}, 1, 5, Pairing::ReflectX},
          {{0.0, 0.1}, -2, 4, Pairing::ReflectX},
          {{0.0, -0.05}, -6, 3, Pairing::ReflectX}};
}

std::vector<WallpaperTerm> two_fold_wallpaper() {
  return {{{1.0, 0.0}, 1, 0, Pairing::None},
          {{1.0, 0.0}, 0, -1, Pairing::None},
          {{0.5, 0.0}, 1, 5, Pairing::None},
          {{0.0, 0.1}, -2, 4, Pairing::None},
          {{0.0, -0.05}, -6, 3, Pairing::None}};
}

std::vector<WallpaperTerm> three_fold_terms() { return {{{1.0, 0.0}, 1, 0, Pairing::None}}; }

std::vector<WallpaperProduct> three_fold_products() { return {{{2.0, 0.0}, {{2, 3}, {1, 4}}}}; }

std::vector<WallpaperTerm> six_fold_wallpaper() {
  return {{{1.0, 0.0}, 2, 3, Pairing::ReflectX},
          {{0.0, 0.5}, 1, 5, Pairing::ReflectX},
          {{0.25, 0.0}, 3, 4, Pairing::ReflectX}};
}

}  // namespace presets

}  // namespace symart
