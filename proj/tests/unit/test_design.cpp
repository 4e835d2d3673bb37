#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "symart/design.hpp"
#include "symart/png_io.hpp"

using namespace symart;
namespace fs = std::filesystem;

namespace {

const fs::path kSpecDir = SYMART_SPEC_DIR;

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / ("symart_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::vector<std::uint8_t> file_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> problems_of(std::string_view json_text) {
  try {
    validate_design_spec(parse_design_spec(json_text));
  } catch (const SpecError& e) {
    return e.problems();
  }
  return {};
}

// Coefficient a of the first a * z^k product in the tree.
std::optional<Complex> coefficient_of_power(const Expr& e, int k) {
  if (e.kind() == ExprKind::Mul && e.child(0).is_constant() && e.child(1).kind() == ExprKind::IntPow &&
      e.child(1).exponent() == k && e.child(1).child(0).kind() == ExprKind::Var) {
    return e.child(0).value();
  }
  if (e.kind() == ExprKind::IntPow && e.exponent() == k && e.child(0).kind() == ExprKind::Var) return Complex{1.0, 0.0};
  for (std::size_t i = 0; i < e.arity(); ++i) {
    if (auto c = coefficient_of_power(e.child(i), k)) return c;
  }
  return std::nullopt;
}

double angle_gap(double a, double b) { return std::fabs(std::remainder(a - b, kTwoPi)); }

DesignSpec small_rosette(int frames, double theta) {
  DesignSpec spec = load_design_spec(kSpecDir / "rosette6.json");
  spec.window.width = 48;
  spec.window.height = 48;
  spec.animation = Animation{theta, frames};
  return spec;
}

}  // namespace

TEST(Spec, ShippedSpecsLoadValidateAndRoundTrip) {
  std::size_t count = 0;
  for (const auto& entry : fs::directory_iterator(kSpecDir)) {
    if (entry.path().extension() != ".json") continue;
    ++count;
    const DesignSpec spec = load_design_spec(entry.path());
    EXPECT_NO_THROW(validate_design_spec(spec)) << entry.path();
    const DesignSpec again = parse_design_spec(serialize_design_spec(spec), spec.base_dir);
    EXPECT_EQ(again, spec) << entry.path();
  }
  EXPECT_GE(count, 9u);
}

TEST(Spec, RoundTripKeepsEveryField) {
  DesignSpec spec;
  spec.mode = DesignMode::Euclidean;
  spec.function = WallpaperSource{3,
                                  {{{{0.5, -0.25}, 1, 2, Pairing::ReflectX}, 1}, {{{1.0, 0.0}, 0, 1, Pairing::PointPair}, {}}},
                                  {{{{2.0, 0.0}, {{2, 3}, {1, 4}}}, -1}}};
  spec.window = {-1.5, 2.5, -0.5, 0.75, 33, 21};
  spec.colormap = {"builtin:checker", 3.5, 128};
  spec.policy = WrapPolicy{2.5, 7.0};
  spec.overlays = {{LatticeGrid{{1.0, 0.0}, kOmega}, {1, 2, 3}, 1.5}, {Horocycle{0.3, -1.0}, {9, 9, 9}, 2.0}};
  spec.animation = Animation{0.0123, 7};
  spec.seed = 99;
  EXPECT_EQ(parse_design_spec(serialize_design_spec(spec)), spec);
}

TEST(Spec, ComplexValueForms) {
  const DesignSpec spec = parse_design_spec(R"({
    "schema": 1,
    "function": {"rosette": {"fold": 1, "terms": [
      {"a": 2, "m": 1, "n": 0}, {"a": [0, 1], "m": 2, "n": 0}, {"a": "1/2 + pi*i", "m": 3, "n": 0}]}},
    "window": {"x_min": -1, "x_max": 1, "y_min": -1, "y_max": 1, "width": 4, "height": 4}
  })");
  const auto& r = std::get<RosetteSource>(spec.function);
  EXPECT_EQ(r.terms[0].term.a, (Complex{2.0, 0.0}));
  EXPECT_EQ(r.terms[1].term.a, (Complex{0.0, 1.0}));
  EXPECT_NEAR(std::abs(r.terms[2].term.a - Complex{0.5, kPi}), 0.0, 1e-15);
}

TEST(Spec, ValidationListsEveryProblem) {
  const auto problems = problems_of(R"({
    "schema": 1,
    "mode": "hyperbolic",
    "function": {"expr": "z +"},
    "window": {"x_min": 1, "x_max": -1, "y_min": -1, "y_max": 1, "width": 0, "height": 4},
    "colormap": {"path": "builtin:nope", "scale_factor": -2},
    "policy": {"kind": "wrap", "period_u": 0, "period_v": 1}
  })");
  EXPECT_GE(problems.size(), 5u);
  std::ostringstream all;
  for (const auto& p : problems) all << p << "\n";
  for (const char* field : {"function", "window", "colormap", "policy"}) {
    EXPECT_NE(all.str().find(field), std::string::npos) << field << "\n" << all.str();
  }
}

TEST(Spec, RejectsStructuralErrors) {
  EXPECT_THROW(parse_design_spec("not json"), SpecError);
  EXPECT_THROW(parse_design_spec(R"({"schema": 2, "function": {"expr": "z"}, "window": {}})"), SpecError);
  EXPECT_FALSE(problems_of(R"({"schema": 1, "function": {"expr": "z"}, "colour": 1,
    "window": {"x_min": -1, "x_max": 1, "y_min": -1, "y_max": 1, "width": 4, "height": 4}})").empty());
}

TEST(Spec, ModeConstraints) {
  EXPECT_FALSE(problems_of(R"({"schema": 1, "mode": "hyperbolic", "function": {"expr": "z"},
    "window": {"x_min": -1, "x_max": 1, "y_min": 0, "y_max": 1, "width": 4, "height": 4}})").empty());
  EXPECT_FALSE(problems_of(R"({"schema": 1, "mode": "disk", "function": {"expr": "z"},
    "window": {"x_min": -2, "x_max": 2, "y_min": -1, "y_max": 1, "width": 4, "height": 4}})").empty());
  EXPECT_TRUE(problems_of(R"({"schema": 1, "mode": "disk", "function": {"expr": "z"},
    "window": {"x_min": -1, "x_max": 1, "y_min": -1, "y_max": 1, "width": 4, "height": 4}})").empty());
}

TEST(Spec, AnimationNeedsTerms) {
  EXPECT_FALSE(problems_of(R"({"schema": 1, "function": {"expr": "z"}, "animation": {"theta": 0.1, "frames": 3},
    "window": {"x_min": -1, "x_max": 1, "y_min": -1, "y_max": 1, "width": 4, "height": 4}})").empty());
  EXPECT_FALSE(problems_of(R"({"schema": 1, "function": {"rosette": {"fold": 1, "terms": [{"a": 1, "m": 1, "n": 0}]}},
    "animation": {"theta": -0.1, "frames": 0},
    "window": {"x_min": -1, "x_max": 1, "y_min": -1, "y_max": 1, "width": 4, "height": 4}})").empty());
}

TEST(Spec, RosetteFoldViolationIsReported) {
  EXPECT_FALSE(problems_of(R"({"schema": 1, "function": {"rosette": {"fold": 6, "terms": [{"a": 1, "m": 1, "n": 0}]}},
    "window": {"x_min": -1, "x_max": 1, "y_min": -1, "y_max": 1, "width": 4, "height": 4}})").empty());
}

TEST(Run, ConstantFunctionGivesUniformImage) {
  TempDir dir("const");
  const DesignSpec spec = parse_design_spec(R"({"schema": 1, "function": {"expr": "0.5 - 0.25i"},
    "window": {"x_min": -1, "x_max": 1, "y_min": -1, "y_max": 1, "width": 24, "height": 16}})");
  const RasterImage img = run_design(spec, dir.path() / "c.png");
  const Rgb first = img.at(0, 0);
  for (Rgb p : img.pixels()) EXPECT_EQ(p, first);
  EXPECT_EQ(read_png(dir.path() / "c.png"), img);
}

TEST(Run, RelativeColorMapPathResolvesAgainstSpec) {
  TempDir dir("relmap");
  write_png(dir.path() / "map.png", RasterImage(8, 8, Rgb{10, 20, 30}));
  std::ofstream(dir.path() / "spec.json") << R"({"schema": 1, "function": {"expr": "0"},
    "colormap": {"path": "map.png", "scale_factor": 1},
    "window": {"x_min": -1, "x_max": 1, "y_min": -1, "y_max": 1, "width": 5, "height": 5}})";
  const DesignSpec spec = load_design_spec(dir.path() / "spec.json");
  const RasterImage img = run_design(spec);
  EXPECT_EQ(img.at(2, 2), (Rgb{10, 20, 30}));
}

TEST(Run, MissingColorMapIsAnError) {
  const DesignSpec spec = parse_design_spec(R"({"schema": 1, "function": {"expr": "z"},
    "colormap": {"path": "/nonexistent/map.png"},
    "window": {"x_min": -1, "x_max": 1, "y_min": -1, "y_max": 1, "width": 5, "height": 5}})");
  EXPECT_ANY_THROW(run_design(spec));
}

TEST(Run, DiskModeBlacksOutsideTheDisc) {
  const DesignSpec spec = load_design_spec(kSpecDir / "disk_log.json");
  DesignSpec small = spec;
  small.window.width = 41;
  small.window.height = 41;
  small.overlays.clear();
  const RasterImage img = run_design(small);
  EXPECT_EQ(img.at(0, 0), kBlack);
  EXPECT_EQ(img.at(40, 40), kBlack);
}

TEST(Run, LatticeWrapSource) {
  DesignSpec spec;
  spec.function = LatticeWrapSource{"3*z", 1.0, 0.5};
  spec.window = {-1, 1, -1, 1, 6, 6};
  const BuiltFunction f = build_function(spec);
  const Complex w = f.fn({0.7, -0.3});
  EXPECT_NEAR(w.real(), std::fmod(2.1, 1.0), 1e-12);
  EXPECT_NEAR(w.imag(), 0.1, 1e-12);
}

TEST(Run, HyperbolicDesignIsStable) {
  DesignSpec spec = load_design_spec(kSpecDir / "hyperbolic_symmetrized.json");
  spec.window.width = 40;
  spec.window.height = 30;
  const ColorMap cmap = load_colormap(spec);
  const RasterImage a = render_design(spec, cmap, 0, {1});
  const RasterImage b = render_design(spec, cmap, 0, {3});
  EXPECT_EQ(a, b);
  EXPECT_EQ(encode_png(a), encode_png(b));
}

TEST(Animate, SingleFrameEqualsStaticRender) {
  TempDir dir("anim1");
  const DesignSpec spec = small_rosette(1, 0.01);
  const FrameSequence seq = animate(spec, dir.path());
  ASSERT_EQ(seq.files.size(), 1u);
  run_design(spec, dir.path() / "static.png");
  EXPECT_EQ(file_bytes(seq.files[0]), file_bytes(dir.path() / "static.png"));
}

TEST(Animate, HundredFramesAndManifest) {
  TempDir dir("anim100");
  DesignSpec spec = small_rosette(100, kTwoPi / 600);
  spec.window.width = 16;
  spec.window.height = 16;
  const FrameSequence seq = animate(spec, dir.path(), {1, true});
  ASSERT_EQ(seq.files.size(), 100u);
  for (int n = 0; n < 100; ++n) {
    EXPECT_TRUE(fs::exists(dir.path() / frame_file_name(n))) << n;
  }
  EXPECT_EQ(frame_file_name(7), "frame_0007.png");

  std::ifstream in(dir.path() / "manifest.json");
  const auto manifest = nlohmann::json::parse(in);
  EXPECT_EQ(manifest["frames"], 100);
  ASSERT_EQ(manifest["parameters"].size(), 100u);
  for (int n = 0; n < 100; ++n) {
    const auto& entry = manifest["parameters"][static_cast<std::size_t>(n)];
    EXPECT_EQ(entry["frame"], n);
    EXPECT_EQ(entry["file"], frame_file_name(n));
    const Complex p{entry["p"][0].get<double>(), entry["p"][1].get<double>()};
    EXPECT_NEAR(std::abs(p - std::polar(1.0, n * kTwoPi / 600)), 0.0, 1e-12);
  }
}

TEST(Animate, ParallelFramesMatchSequential) {
  TempDir seq_dir("anim_seq"), par_dir("anim_par");
  const DesignSpec spec = small_rosette(6, 0.2);
  animate(spec, seq_dir.path(), {1, false});
  animate(spec, par_dir.path(), {1, true});
  for (int n = 0; n < 6; ++n) {
    EXPECT_EQ(file_bytes(seq_dir.path() / frame_file_name(n)), file_bytes(par_dir.path() / frame_file_name(n)));
  }
}

TEST(Animate, CoefficientsRotateWithFrame) {
  const double theta = 0.037;
  const DesignSpec spec = small_rosette(100, theta);
  for (int n : {0, 1, 5, 99}) {
    const BuiltFunction f = build_function(spec, n);
    ASSERT_TRUE(f.expr.has_value());
    const auto outer = coefficient_of_power(*f.expr, 6);
    const auto inner = coefficient_of_power(*f.expr, -6);
    ASSERT_TRUE(outer && inner);
    EXPECT_LT(angle_gap(std::arg(*outer), std::arg(Complex{0.0, 0.25}) + n * theta), 1e-12) << n;
    EXPECT_NEAR(std::abs(*outer), 0.25, 1e-15);
    EXPECT_LT(angle_gap(std::arg(*inner), -n * theta), 1e-12) << n;
  }
}

TEST(Animate, ExplicitSpinsOverrideDefaults) {
  DesignSpec spec = small_rosette(10, 0.1);
  auto& r = std::get<RosetteSource>(spec.function);
  r.terms[1].spin = 2;  // z^6 term; the others default to 0 once any spin is given
  const BuiltFunction f = build_function(spec, 3);
  EXPECT_LT(angle_gap(std::arg(*coefficient_of_power(*f.expr, 6)), kPi / 2 + 0.6), 1e-12);
  EXPECT_EQ(*coefficient_of_power(*f.expr, -6), (Complex{1.0, 0.0}));
  EXPECT_TRUE(has_animated_terms(spec));
}

TEST(Animate, RequiresAnimationBlock) {
  DesignSpec spec = small_rosette(1, 0.1);
  spec.animation.reset();
  TempDir dir("anim_none");
  EXPECT_THROW(animate(spec, dir.path()), SpecError);
}
