#include "symart/modular.hpp"

#include <array>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace symart {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("MobiusInt: entry overflow");
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("MobiusInt: entry overflow");
  return out;
}

}  // namespace

MobiusInt::MobiusInt(std::int64_t j, std::int64_t k, std::int64_t m, std::int64_t n) {
  const std::int64_t det = checked_add(checked_mul(j, n), -checked_mul(m, k));
  if (det != 1) {
    throw std::invalid_argument("MobiusInt: determinant is " + std::to_string(det) + ", expected 1");
  }
  const bool flip = m < 0 || (m == 0 && j < 0);
  const std::int64_t s = flip ? -1 : 1;
  j_ = s * j;
  k_ = s * k;
  m_ = s * m;
  n_ = s * n;
}

Complex MobiusInt::operator()(Complex z) const {
  return (static_cast<double>(j_) * z + static_cast<double>(k_)) /
         (static_cast<double>(m_) * z + static_cast<double>(n_));
}

MobiusInt operator*(const MobiusInt& x, const MobiusInt& y) {
  return {checked_add(checked_mul(x.j(), y.j()), checked_mul(x.k(), y.m())),
          checked_add(checked_mul(x.j(), y.k()), checked_mul(x.k(), y.n())),
          checked_add(checked_mul(x.m(), y.j()), checked_mul(x.n(), y.m())),
          checked_add(checked_mul(x.m(), y.k()), checked_mul(x.n(), y.n()))};
}

std::string to_string(const MobiusInt& g) {
  return "(" + std::to_string(g.j()) + "," + std::to_string(g.k()) + ";" + std::to_string(g.m()) + "," +
         std::to_string(g.n()) + ")";
}

std::vector<CoprimeNode> coprime_tree(std::int64_t root_j, std::int64_t root_k, int depth) {
  const bool known_root = (root_j == 2 || root_j == 3) && root_k == 1;
  if (!known_root) throw std::invalid_argument("coprime_tree: root must be (2,1) or (3,1)");
  if (depth < 0 || depth > kMaxTreeDepth) {
    throw std::invalid_argument("coprime_tree: depth must be in [0, " + std::to_string(kMaxTreeDepth) + "]");
  }
  std::vector<CoprimeNode> out;
  out.reserve(static_cast<std::size_t>((std::pow(3, depth + 1) - 1) / 2));
  out.push_back({root_j, root_k, 0, 1, 0});
  // The output vector doubles as the BFS queue.
  for (std::size_t head = 0; head < out.size(); ++head) {
    const CoprimeNode node = out[head];
    if (node.depth == depth) continue;
    const auto [j, k, u, v, d] = node;
    out.push_back({2 * j - k, j, -v, u + 2 * v, d + 1});
    out.push_back({2 * j + k, j, v, u - 2 * v, d + 1});
    out.push_back({2 * k + j, k, u, v - 2 * u, d + 1});
  }
  return out;
}

std::size_t gamma_element_count(int depth) {
  std::size_t per_tree = 0;
  std::size_t level = 1;
  for (int d = 0; d <= depth; ++d, level *= 3) per_tree += level;
  return 2 + 4 * per_tree;
}

namespace {

std::vector<MobiusInt> build_gamma_elements(int depth) {
  std::vector<MobiusInt> out;
  out.reserve(gamma_element_count(depth));
  out.push_back(MobiusInt::identity());
  out.push_back(MobiusInt::inversion());
  for (std::int64_t root : {2, 3}) {
    for (const auto& node : coprime_tree(root, 1, depth)) {
      const std::int64_t m = -node.bezout_v;
      const std::int64_t n = node.bezout_u;
      out.emplace_back(node.j, node.k, m, n);
      out.emplace_back(-node.j, node.k, m, -n);
    }
  }
  return out;
}

}  // namespace

const std::vector<MobiusInt>& gamma_elements(int depth) {
  if (depth < 0 || depth > kMaxGammaDepth) {
    throw std::invalid_argument("gamma_elements: depth must be in [0, " + std::to_string(kMaxGammaDepth) + "]");
  }
  static const auto cache = [] {
    std::array<std::vector<MobiusInt>, kMaxGammaDepth + 1> all;
    for (int d = 0; d <= kMaxGammaDepth; ++d) all[d] = build_gamma_elements(d);
    return all;
  }();
  return cache[depth];
}

MobiusInt to_matrix(const GammaWord& word) {
  if (word.powers.empty()) throw std::invalid_argument("GammaWord: empty power list");
  MobiusInt acc = MobiusInt::translation(word.powers.front());
  for (std::size_t i = 1; i < word.powers.size(); ++i) {
    acc = acc * MobiusInt::inversion() * MobiusInt::translation(word.powers[i]);
  }
  return acc;
}

GammaWord inverse(const GammaWord& word) {
  GammaWord out;
  out.powers.assign(word.powers.rbegin(), word.powers.rend());
  for (auto& p : out.powers) p = -p;
  return out;
}

std::string to_string(const GammaWord& word) {
  std::string out;
  for (std::size_t i = 0; i < word.powers.size(); ++i) {
    if (i > 0) out += " I ";
    out += "T^" + std::to_string(word.powers[i]);
  }
  return out;
}

GammaWord gamma_word_decompose(const MobiusInt& g) {
  GammaWord word;
  word.powers.clear();
  MobiusInt rest = g;
  // rest = T^q I rest' with the lower-left entry strictly shrinking.
  while (rest.m() != 0) {
    const std::int64_t q = rest.j() / rest.m();
    const MobiusInt shifted = MobiusInt::translation(-q) * rest;
    rest = MobiusInt::inversion() * shifted;
    word.powers.push_back(q);
  }
  // m == 0 and the canonical sign leave j = n = 1.
  word.powers.push_back(rest.k());
  return word;
}

Reduction reduce_to_fundamental_domain(Complex z, double tol) {
  if (!(z.imag() > 0.0) || !is_finite(z)) {
    throw std::invalid_argument("reduce_to_fundamental_domain: point must lie in the upper half-plane");
  }
  Reduction out{z, GammaWord{}, 0};
  auto& powers = out.word.powers;
  Complex w = z;
  for (int step = 0; step < kReductionCap; ++step) {
    // Shift Re w into [-1/2, 1/2); 1/2 itself maps to -1/2.
    const double shift = std::floor(w.real() + 0.5);
    if (shift != 0.0) {
      w -= shift;
      powers.front() -= static_cast<std::int64_t>(shift);
    }
    const double r2 = std::norm(w);
    const bool inside = r2 < 1.0 - tol;
    const bool on_arc_right = !inside && r2 <= 1.0 + tol && w.real() > tol;
    if (!inside && !on_arc_right) {
      out.w = w;
      out.steps = step;
      return out;
    }
    w = -1.0 / w;
    powers.insert(powers.begin(), 0);
  }
  throw std::runtime_error("reduce_to_fundamental_domain: iteration cap reached");
}

std::optional<int> element_order(const MobiusInt& g, int cap) {
  if (cap < 1) throw std::invalid_argument("element_order: cap must be >= 1");
  MobiusInt power = g;
  for (int q = 1; q <= cap; ++q) {
    if (power.is_identity()) return q;
    if (q == cap) break;
    try {
      power = power * g;
    } catch (const std::overflow_error&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

RotationCenter conjugate_center(const MobiusInt& g, Complex z0, const MobiusInt& c) {
  constexpr double kFixTol = 1e-9;
  if (std::abs(g(z0) - z0) > kFixTol) throw std::invalid_argument("conjugate_center: z0 is not fixed by g");
  const auto order = element_order(g, 12);
  if (!order) throw std::invalid_argument("conjugate_center: g has no finite order");
  const Complex center = c(z0);
  const MobiusInt h = c * g * c.inverse();
  if (std::abs(h(center) - center) > kFixTol) {
    throw std::runtime_error("conjugate_center: conjugated element does not fix the image point");
  }
  return {center, *order};
}

SymmetrizedFunction::SymmetrizedFunction(const Expr& f, int depth, EvalEnv env)
    : f_(f, env), depth_(depth), elements_(&gamma_elements(depth)) {}

Complex SymmetrizedFunction::operator()(Complex z) const {
  Complex sum{0.0, 0.0};
  for (const auto& g : *elements_) sum += f_(g(z));
  return sum;
}

}  // namespace symart
