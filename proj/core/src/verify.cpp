#include "symart/verify.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "symart/euclid.hpp"
#include "symart/hyperbolic.hpp"
#include "symart/modular.hpp"

namespace symart {

namespace {

std::string sci(double x) {
  std::ostringstream out;
  out.precision(3);
  out << std::scientific << x;
  return out.str();
}

class Recorder {
 public:
  explicit Recorder(std::string suite) : suite_(std::move(suite)) {}

  void below(const std::string& name, double value, double limit) {
    out.push_back({suite_, name, value < limit, "residual " + sci(value) + " (limit " + sci(limit) + ")"});
  }
  void above(const std::string& name, double value, double limit) {
    out.push_back({suite_, name, value > limit, "residual " + sci(value) + " (must exceed " + sci(limit) + ")"});
  }
  void flag(const std::string& name, bool ok, std::string detail) {
    out.push_back({suite_, name, ok, std::move(detail)});
  }

  std::vector<CheckResult> out;

 private:
  std::string suite_;
};

void euclid_checks(Recorder& rec, std::uint64_t seed) {
  constexpr double kTol = 1e-9;
  const SymmetryCheck annulus{10000, Annulus{0.5, 2.0}, seed};
  const SymmetryCheck box{10000, Box{{-2.0, -2.0}, {2.0, 2.0}}, seed};

  const Expr six = build_rosette(6, presets::six_fold_rosette(), false);
  rec.below("rosette6 rotation 2pi/6", check_symmetry(six, {}, Rotation{kTwoPi / 6}, annulus), kTol);

  const Expr five = build_rosette(5, presets::five_fold_mirror_rosette(), true);
  rec.below("rosette5 rotation 2pi/5", check_symmetry(five, {}, Rotation{kTwoPi / 5}, annulus), kTol);
  rec.below("rosette5 conjugation", check_symmetry(five, {}, Conjugation{}, annulus), kTol);

  const auto w4 = build_wallpaper(4, presets::four_fold_wallpaper());
  rec.below("wallpaper4 rotation pi/2", check_symmetry(w4.expr, w4.env, Rotation{kPi / 2}, box), kTol);
  rec.below("wallpaper4 translation 1", check_symmetry(w4.expr, w4.env, Translation{{1.0, 0.0}}, box), kTol);
  rec.below("wallpaper4 translation i", check_symmetry(w4.expr, w4.env, Translation{{0.0, 1.0}}, box), kTol);
  rec.below("wallpaper4 conjugation", check_symmetry(w4.expr, w4.env, Conjugation{}, box), kTol);
  rec.below("wallpaper4 centre (1+i)/2",
            check_symmetry(w4.expr, w4.env, Rotation{kPi / 2, {0.5, 0.5}}, box), kTol);

  const auto w3 = build_wallpaper(3, presets::three_fold_terms(), presets::three_fold_products());
  const Complex c3 = 2.0 / 3.0 + kOmega / 3.0;
  rec.below("wallpaper3 rotation 2pi/3", check_symmetry(w3.expr, w3.env, Rotation{kTwoPi / 3}, box), kTol);
  rec.below("wallpaper3 translation 1", check_symmetry(w3.expr, w3.env, Translation{{1.0, 0.0}}, box), kTol);
  rec.below("wallpaper3 translation omega", check_symmetry(w3.expr, w3.env, Translation{kOmega}, box), kTol);
  rec.below("wallpaper3 centre 2/3+omega/3", check_symmetry(w3.expr, w3.env, Rotation{kTwoPi / 3, c3}, box),
            kTol);

  const auto w6 = build_wallpaper(6, presets::six_fold_wallpaper());
  rec.below("wallpaper6 negation", check_symmetry(w6.expr, w6.env, Negation{}, box), kTol);
  rec.below("wallpaper6 rotation 2pi/3", check_symmetry(w6.expr, w6.env, Rotation{kTwoPi / 3}, box), kTol);
  rec.below("wallpaper6 rotation 2pi/6", check_symmetry(w6.expr, w6.env, Rotation{kTwoPi / 6}, box), kTol);
  rec.below("wallpaper6 conjugation", check_symmetry(w6.expr, w6.env, Conjugation{}, box), kTol);

  const auto w2 = build_wallpaper(2, presets::two_fold_wallpaper());
  rec.below("wallpaper2 negation", check_symmetry(w2.expr, w2.env, Negation{}, box), kTol);
  rec.above("wallpaper2 conjugation breaks", check_symmetry(w2.expr, w2.env, Conjugation{}, box), 1e-3);

  std::string crystal;
  bool crystal_ok = true;
  for (int n = 2; n <= 24; ++n) {
    const bool expected = n == 2 || n == 3 || n == 4 || n == 6;
    if (is_crystallographic(n) != expected) {
      crystal_ok = false;
      crystal += " n=" + std::to_string(n);
    }
  }
  rec.flag("crystallographic orders 2..24", crystal_ok, crystal_ok ? "true exactly on {2,3,4,6}" : "wrong at" + crystal);
}

MobiusReal random_mobius(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  for (;;) {
    const double a = coef(rng), b = coef(rng), c = coef(rng), d = coef(rng);
    if (a * d - b * c > 0.1) return {a, b, c, d};
  }
}

Complex random_h(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> x(-3.0, 3.0);
  std::uniform_real_distribution<double> logy(std::log(0.05), std::log(5.0));
  return {x(rng), std::exp(logy(rng))};
}

void hyperbolic_checks(Recorder& rec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);

  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const MobiusReal g = random_mobius(rng);
    const Complex z = random_h(rng), w = random_h(rng);
    worst = std::max(worst, std::fabs(hyperbolic_distance(g(z), g(w)) - hyperbolic_distance(z, w)));
  }
  rec.below("distance invariant under isometries", worst, 1e-9);

  const Complex center{2.0, 3.0};
  const EuclideanCircle circle = hyperbolic_circle(center, 0.7);
  worst = 0.0;
  for (int k = 0; k < 360; ++k) {
    const Complex p = circle.center + std::polar(circle.radius, kTwoPi * k / 360.0);
    worst = std::max(worst, std::fabs(hyperbolic_distance(center, p) - 0.7));
  }
  rec.below("hyperbolic circle boundary", worst, 1e-9);

  const MobiusInt ti = MobiusInt::translation(1) * MobiusInt::inversion();
  const auto order = element_order(ti, 100);
  rec.flag("TI has order 3", order == 3, order ? "order " + std::to_string(*order) : "no finite order");
  const Complex z1{0.5, std::sqrt(3.0) / 2.0};
  const auto moved = conjugate_center(ti, z1, MobiusInt::inversion() * MobiusInt::translation(-2));
  rec.below("conjugated centre 1/2 + i sqrt3/6", std::abs(moved.center - Complex{0.5, std::sqrt(3.0) / 6.0}), 1e-9);

  bool trees_ok = true;
  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  std::size_t nodes = 0;
  for (std::int64_t root : {2, 3}) {
    for (const auto& node : coprime_tree(root, 1, 6)) {
      ++nodes;
      trees_ok = trees_ok && std::gcd(node.j, node.k) == 1 && node.bezout_u * node.j + node.bezout_v * node.k == 1;
      trees_ok = trees_ok && seen.insert({node.j, node.k}).second;
    }
  }
  rec.flag("coprime trees to depth 6", trees_ok && nodes == 2 * 1093,
           std::to_string(nodes) + " nodes, gcd/Bezout/uniqueness " + (trees_ok ? "hold" : "violated"));

  bool counts_ok = true;
  std::string counts;
  for (int d = 0; d <= 4; ++d) {
    const auto n = gamma_elements(d).size();
    counts += (d ? "," : "") + std::to_string(n);
    counts_ok = counts_ok && n == gamma_element_count(d);
  }
  rec.flag("gamma element counts", counts_ok, counts);

  std::uniform_real_distribution<double> x(-10.0, 10.0);
  std::uniform_real_distribution<double> logy(std::log(1e-3), std::log(1e3));
  double round_trip = 0.0;
  bool in_domain = true;
  for (int i = 0; i < 10000; ++i) {
    const Complex z{x(rng), std::exp(logy(rng))};
    const Reduction red = reduce_to_fundamental_domain(z);
    in_domain = in_domain && std::fabs(red.w.real()) <= 0.5 + 1e-12 && std::abs(red.w) >= 1.0 - 1e-12;
    round_trip = std::max(round_trip, std::abs(to_matrix(inverse(red.word))(red.w) - z));
  }
  rec.flag("reduction lands in F", in_domain, "10000 points");
  rec.below("reduction round trip", round_trip, 1e-9);

  bool words_ok = true;
  std::uniform_int_distribution<int> len(0, 12);
  std::uniform_int_distribution<int> gen(0, 2);
  for (int i = 0; i < 100; ++i) {
    MobiusInt g = MobiusInt::identity();
    for (int k = len(rng); k > 0; --k) {
      const int pick = gen(rng);
      g = g * (pick == 0 ? MobiusInt::translation(1) : pick == 1 ? MobiusInt::translation(-1) : MobiusInt::inversion());
    }
    words_ok = words_ok && to_matrix(gamma_word_decompose(g)) == g;
  }
  rec.flag("word decomposition recomposes", words_ok, "100 random words");
}

}  // namespace

std::vector<CheckResult> run_verify_suite(VerifySuite suite, std::uint64_t seed) {
  std::vector<CheckResult> out;
  if (suite == VerifySuite::Euclid || suite == VerifySuite::All) {
    Recorder rec("euclid");
    euclid_checks(rec, seed);
    out.insert(out.end(), rec.out.begin(), rec.out.end());
  }
  if (suite == VerifySuite::Hyperbolic || suite == VerifySuite::All) {
    Recorder rec("hyperbolic");
    hyperbolic_checks(rec, seed);
    out.insert(out.end(), rec.out.begin(), rec.out.end());
  }
  return out;
}

}  // namespace symart
