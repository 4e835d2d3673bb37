#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symart/expr.hpp"

namespace symart {

/// z -> (j z + k) / (m z + n) with integer entries and jn - mk = 1, stored with
/// m > 0, or m == 0 and j > 0, so each map has exactly one representation.
class MobiusInt {
 public:
  /// Throws std::invalid_argument unless jn - mk = 1.
  MobiusInt(std::int64_t j, std::int64_t k, std::int64_t m, std::int64_t n);

  static MobiusInt identity() { return {1, 0, 0, 1}; }
  static MobiusInt translation(std::int64_t p) { return {1, p, 0, 1}; }
  static MobiusInt inversion() { return {0, -1, 1, 0}; }

  std::int64_t j() const { return j_; }
  std::int64_t k() const { return k_; }
  std::int64_t m() const { return m_; }
  std::int64_t n() const { return n_; }

  Complex operator()(Complex z) const;
  MobiusInt inverse() const { return {n_, -k_, -m_, j_}; }
  bool is_identity() const { return j_ == 1 && k_ == 0 && m_ == 0 && n_ == 1; }

  friend bool operator==(const MobiusInt&, const MobiusInt&) = default;

 private:
  std::int64_t j_, k_, m_, n_;
};

/// The map z -> x(y(z)). Throws std::overflow_error if an entry leaves int64.
MobiusInt operator*(const MobiusInt& x, const MobiusInt& y);

std::string to_string(const MobiusInt& g);

/// A coprime pair with Bezout coefficients: bezout_u * j + bezout_v * k = 1.
struct CoprimeNode {
  std::int64_t j = 0;
  std::int64_t k = 0;
  std::int64_t bezout_u = 0;
  std::int64_t bezout_v = 0;
  int depth = 0;
  friend bool operator==(const CoprimeNode&, const CoprimeNode&) = default;
};

inline constexpr int kMaxTreeDepth = 10;
inline constexpr int kMaxGammaDepth = 6;

/// Breadth-first listing of the trinary tree of coprime pairs rooted at
/// (2,1) or (3,1). Children of (j,k) with coefficients (u,v), in order:
///   (2j - k, j)  with (-v, u + 2v)
///   (2j + k, j)  with (v, u - 2v)
///   (2k + j, k)  with (u, v - 2u)
/// The root carries (0, 1).
std::vector<CoprimeNode> coprime_tree(std::int64_t root_j, std::int64_t root_k, int depth);

/// Identity, inversion, then for each node of the (2,1) tree followed by the
/// (3,1) tree the pair (j,k; m,n), (-j,k; m,-n) with m = -v, n = u.
/// The result is computed once per depth and shared.
const std::vector<MobiusInt>& gamma_elements(int depth);

/// Expected size of gamma_elements(depth).
std::size_t gamma_element_count(int depth);

/// powers [p0, p1, ..., pL] stand for T^p0 I T^p1 I ... I T^pL.
struct GammaWord {
  std::vector<std::int64_t> powers{0};
  friend bool operator==(const GammaWord&, const GammaWord&) = default;
};

MobiusInt to_matrix(const GammaWord& word);
GammaWord inverse(const GammaWord& word);
std::string to_string(const GammaWord& word);

/// Division-algorithm factorisation; to_matrix(result) == g.
GammaWord gamma_word_decompose(const MobiusInt& g);

struct Reduction {
  Complex w;
  GammaWord word;  // w == to_matrix(word)(z)
  int steps = 0;
};

inline constexpr int kReductionCap = 10000;

/// Moves z into {|Re w| <= 1/2, |w| >= 1}. On the boundary the representative
/// with Re w <= 0 is chosen. Throws std::runtime_error if the iteration cap
/// is reached.
Reduction reduce_to_fundamental_domain(Complex z, double tol = 1e-12);

/// Smallest q <= cap with g^q = identity in PSL(2,Z).
std::optional<int> element_order(const MobiusInt& g, int cap);

struct RotationCenter {
  Complex center;
  int order = 0;
};

/// Given a finite-order g fixing z0, the conjugate c g c^-1 fixes c(z0) with the
/// same order. Throws std::invalid_argument when z0 is not fixed or g has
/// no finite order.
RotationCenter conjugate_center(const MobiusInt& g, Complex z0, const MobiusInt& c);

/// g(z) = sum of f(h(z)) over gamma_elements(depth), in enumeration order.
class SymmetrizedFunction {
 public:
  SymmetrizedFunction(const Expr& f, int depth, EvalEnv env = {});

  Complex operator()(Complex z) const;
  std::size_t term_count() const { return elements_->size(); }
  int depth() const { return depth_; }

 private:
  CompiledExpr f_;
  int depth_;
  const std::vector<MobiusInt>* elements_;
};

inline SymmetrizedFunction symmetrize(const Expr& f, int depth) { return SymmetrizedFunction(f, depth); }

}  // namespace symart
