#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "symart/euclid.hpp"
#include "symart/expr.hpp"
#include "symart/numeric.hpp"
#include "symart/render.hpp"

namespace symart {

enum class DesignMode { Euclidean, Hyperbolic, Disk };

struct ExprSource {
  std::string text;
  friend bool operator==(const ExprSource&, const ExprSource&) = default;
};

/// A term plus its animation spin: frame n multiplies the coefficient by
/// e^{i spin n theta}.
struct AnimatedRosetteTerm {
  RosetteTerm term;
  std::optional<int> spin;
  friend bool operator==(const AnimatedRosetteTerm&, const AnimatedRosetteTerm&) = default;
};

struct RosetteSource {
  int fold = 1;
  bool mirror_x = false;
  std::vector<AnimatedRosetteTerm> terms;
  friend bool operator==(const RosetteSource&, const RosetteSource&) = default;
};

struct AnimatedWallpaperTerm {
  WallpaperTerm term;
  std::optional<int> spin;
  friend bool operator==(const AnimatedWallpaperTerm&, const AnimatedWallpaperTerm&) = default;
};

struct AnimatedWallpaperProduct {
  WallpaperProduct product;
  std::optional<int> spin;
  friend bool operator==(const AnimatedWallpaperProduct&, const AnimatedWallpaperProduct&) = default;
};

struct WallpaperSource {
  int order = 4;
  std::vector<AnimatedWallpaperTerm> terms;
  std::vector<AnimatedWallpaperProduct> products;
  friend bool operator==(const WallpaperSource&, const WallpaperSource&) = default;
};

struct SymmetrizeSource {
  std::string expr;
  int depth = 3;
  friend bool operator==(const SymmetrizeSource&, const SymmetrizeSource&) = default;
};

/// lattice_wrap(inner(z), width, height)
struct LatticeWrapSource {
  std::string inner = "z";
  double width = 1.0;
  double height = 1.0;
  friend bool operator==(const LatticeWrapSource&, const LatticeWrapSource&) = default;
};

using FunctionSource = std::variant<ExprSource, RosetteSource, WallpaperSource, SymmetrizeSource, LatticeWrapSource>;

struct ColorMapSource {
  /// A PNG path (relative paths resolve against the spec's directory) or
  /// "builtin:<name>".
  std::string path = "builtin:smooth";
  double scale_factor = ColorMap::kDefaultScale;
  int builtin_size = 512;
  friend bool operator==(const ColorMapSource&, const ColorMapSource&) = default;
};

struct Animation {
  double theta = kTwoPi / 600.0;
  int frames = 100;
  friend bool operator==(const Animation&, const Animation&) = default;
};

struct DesignSpec {
  int schema = 1;
  DesignMode mode = DesignMode::Euclidean;
  FunctionSource function = ExprSource{"z"};
  /// Only consulted for expression sources; builders pick their own lattice.
  Lattice lattice = Lattice::Square;
  Window window;
  ColorMapSource colormap;
  OutOfRangePolicy policy = BlackPolicy{};
  std::vector<Overlay> overlays;
  std::optional<Animation> animation;
  std::uint64_t seed = 1;
  /// Disk mode only: evaluate f at the preimage of the pixel under the Cayley map.
  bool disk_pullback = false;
  /// Directory used to resolve a relative colour map path.
  std::filesystem::path base_dir;

  friend bool operator==(const DesignSpec& a, const DesignSpec& b);
};

/// Every problem found in a spec, one message per violated field.
class SpecError : public std::runtime_error {
 public:
  explicit SpecError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

DesignSpec parse_design_spec(std::string_view json_text, const std::filesystem::path& base_dir = {});
DesignSpec load_design_spec(const std::filesystem::path& path);
std::string serialize_design_spec(const DesignSpec& spec);

/// Throws SpecError listing all violations.
void validate_design_spec(const DesignSpec& spec);

struct BuiltFunction {
  PlaneFunction fn;
  /// The expression behind fn, when there is one (not for symmetrized or wrapped designs).
  std::optional<Expr> expr;
  EvalEnv env;
};

/// The function for animation frame `frame` (frame 0 is the static design).
BuiltFunction build_function(const DesignSpec& spec, int frame = 0);

ColorMap load_colormap(const DesignSpec& spec);

struct RunOptions {
  int workers = 0;
};

/// Renders the design for one frame, overlays included.
RasterImage render_design(const DesignSpec& spec, const ColorMap& cmap, int frame = 0, const RunOptions& options = {});

/// Validates, renders and (if out is non-empty) writes the PNG.
RasterImage run_design(const DesignSpec& spec, const std::filesystem::path& out = {}, const RunOptions& options = {});

struct AnimateOptions {
  int workers = 0;
  bool parallel_frames = false;
};

struct FrameSequence {
  std::filesystem::path directory;
  std::vector<std::filesystem::path> files;
  std::vector<Complex> parameters;  // p^n = e^{i n theta}
};

std::string frame_file_name(int n);

/// Renders every frame into dir as frame_NNNN.png and writes manifest.json.
FrameSequence animate(const DesignSpec& spec, const std::filesystem::path& dir, const AnimateOptions& options = {});

/// True if some term of the function carries a non-zero spin.
bool has_animated_terms(const DesignSpec& spec);

}  // namespace symart
