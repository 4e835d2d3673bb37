#include "symart/design.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "json.hpp"
#include "symart/modular.hpp"
#include "symart/png_io.hpp"

namespace symart {

using nlohmann::json;

SpecError::SpecError(std::vector<std::string> problems)
    : std::runtime_error([&] {
        std::string msg = "invalid design spec:";
        for (const auto& p : problems) msg += "\n  " + p;
        return msg;
      }()),
      problems_(std::move(problems)) {}

bool operator==(const DesignSpec& a, const DesignSpec& b) {
  return a.schema == b.schema && a.mode == b.mode && a.function == b.function && a.lattice == b.lattice &&
         a.window == b.window && a.colormap == b.colormap && a.policy == b.policy && a.overlays == b.overlays &&
         a.animation == b.animation && a.seed == b.seed && a.disk_pullback == b.disk_pullback;
}

namespace {

constexpr std::string_view kBuiltinPrefix = "builtin:";

// Collects problems while reading so one pass reports every bad field.
class Reader {
 public:
  std::vector<std::string> problems;

  void fail(const std::string& where, const std::string& what) { problems.push_back(where + ": " + what); }

  const json* field(const json& obj, const std::string& where, const char* key, bool required) {
    if (!obj.is_object()) return nullptr;
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) fail(where + "." + key, "missing");
      return nullptr;
    }
    return &*it;
  }

  double number(const json& obj, const std::string& where, const char* key, double fallback, bool required = false) {
    const json* v = field(obj, where, key, required);
    if (!v) return fallback;
    if (!v->is_number()) {
      fail(where + "." + key, "expected a number");
      return fallback;
    }
    return v->get<double>();
  }

  long long integer(const json& obj, const std::string& where, const char* key, long long fallback,
                    bool required = false) {
    const json* v = field(obj, where, key, required);
    if (!v) return fallback;
    if (!v->is_number_integer()) {
      fail(where + "." + key, "expected an integer");
      return fallback;
    }
    return v->get<long long>();
  }

  bool boolean(const json& obj, const std::string& where, const char* key, bool fallback) {
    const json* v = field(obj, where, key, false);
    if (!v) return fallback;
    if (!v->is_boolean()) {
      fail(where + "." + key, "expected true or false");
      return fallback;
    }
    return v->get<bool>();
  }

  std::string string(const json& obj, const std::string& where, const char* key, std::string fallback,
                     bool required = false) {
    const json* v = field(obj, where, key, required);
    if (!v) return fallback;
    if (!v->is_string()) {
      fail(where + "." + key, "expected a string");
      return fallback;
    }
    return v->get<std::string>();
  }

  // A number, a [re, im] pair, or a constant expression such as "0.25i".
  Complex complex(const json& v, const std::string& where) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
      return {v[0].get<double>(), v[1].get<double>()};
    }
    if (v.is_string()) {
      try {
        const Expr e = parse_expression(v.get<std::string>());
        if (e.is_constant()) return e.value();
        fail(where, "expression is not constant");
      } catch (const ParseError& err) {
        fail(where, err.what());
      }
      return {};
    }
    fail(where, "expected a number, [re, im] or a constant expression");
    return {};
  }

  Complex complex_field(const json& obj, const std::string& where, const char* key, Complex fallback,
                        bool required = false) {
    const json* v = field(obj, where, key, required);
    if (!v) return fallback;
    return complex(*v, where + "." + key);
  }
};

std::string mode_name(DesignMode m) {
  switch (m) {
    case DesignMode::Euclidean: return "euclidean";
    case DesignMode::Hyperbolic: return "hyperbolic";
    case DesignMode::Disk: return "disk";
  }
  return "euclidean";
}

std::string pairing_name(Pairing p) {
  switch (p) {
    case Pairing::None: return "none";
    case Pairing::ReflectX: return "reflect_x";
    case Pairing::PointPair: return "point_pair";
  }
  return "none";
}

std::optional<int> read_spin(Reader& rd, const json& obj, const std::string& where) {
  const json* v = rd.field(obj, where, "spin", false);
  if (!v) return std::nullopt;
  if (!v->is_number_integer()) {
    rd.fail(where + ".spin", "expected an integer");
    return std::nullopt;
  }
  return v->get<int>();
}

FunctionSource read_function(Reader& rd, const json& j) {
  const std::string where = "function";
  if (!j.is_object() || j.size() != 1) {
    rd.fail(where, "expected an object with exactly one of expr, rosette, wallpaper, symmetrize, lattice_wrap");
    return ExprSource{"z"};
  }
  const auto& [key, body] = *j.items().begin();
  const std::string at = where + "." + key;

  if (key == "expr") {
    if (!body.is_string()) {
      rd.fail(at, "expected a string");
      return ExprSource{"z"};
    }
    return ExprSource{body.get<std::string>()};
  }
  if (key == "rosette") {
    RosetteSource r;
    r.fold = static_cast<int>(rd.integer(body, at, "fold", 1, true));
    r.mirror_x = rd.boolean(body, at, "mirror_x", false);
    const json* terms = rd.field(body, at, "terms", true);
    if (terms && !terms->is_array()) rd.fail(at + ".terms", "expected an array");
    if (terms && terms->is_array()) {
      for (std::size_t i = 0; i < terms->size(); ++i) {
        const std::string t = at + ".terms[" + std::to_string(i) + "]";
        const json& tj = (*terms)[i];
        AnimatedRosetteTerm term;
        term.term.a = rd.complex_field(tj, t, "a", {1.0, 0.0});
        term.term.m = static_cast<int>(rd.integer(tj, t, "m", 0, true));
        term.term.n = static_cast<int>(rd.integer(tj, t, "n", 0, true));
        term.spin = read_spin(rd, tj, t);
        r.terms.push_back(term);
      }
    }
    return r;
  }
  if (key == "wallpaper") {
    WallpaperSource w;
    w.order = static_cast<int>(rd.integer(body, at, "order", 4, true));
    if (const json* terms = rd.field(body, at, "terms", false)) {
      if (!terms->is_array()) rd.fail(at + ".terms", "expected an array");
      for (std::size_t i = 0; terms->is_array() && i < terms->size(); ++i) {
        const std::string t = at + ".terms[" + std::to_string(i) + "]";
        const json& tj = (*terms)[i];
        AnimatedWallpaperTerm term;
        term.term.a = rd.complex_field(tj, t, "a", {1.0, 0.0});
        term.term.m = static_cast<int>(rd.integer(tj, t, "m", 0, true));
        term.term.n = static_cast<int>(rd.integer(tj, t, "n", 0, true));
        const std::string pairing = rd.string(tj, t, "pairing", "none");
        if (pairing == "none") {
          term.term.pairing = Pairing::None;
        } else if (pairing == "reflect_x") {
          term.term.pairing = Pairing::ReflectX;
        } else if (pairing == "point_pair") {
          term.term.pairing = Pairing::PointPair;
        } else {
          rd.fail(t + ".pairing", "expected none, reflect_x or point_pair");
        }
        term.spin = read_spin(rd, tj, t);
        w.terms.push_back(term);
      }
    }
    if (const json* prods = rd.field(body, at, "products", false)) {
      if (!prods->is_array()) rd.fail(at + ".products", "expected an array");
      for (std::size_t i = 0; prods->is_array() && i < prods->size(); ++i) {
        const std::string t = at + ".products[" + std::to_string(i) + "]";
        const json& pj = (*prods)[i];
        AnimatedWallpaperProduct prod;
        prod.product.a = rd.complex_field(pj, t, "a", {1.0, 0.0});
        const json* factors = rd.field(pj, t, "factors", true);
        if (factors) {
          bool ok = factors->is_array();
          for (std::size_t f = 0; ok && f < factors->size(); ++f) {
            const json& pair = (*factors)[f];
            ok = pair.is_array() && pair.size() == 2 && pair[0].is_number_integer() && pair[1].is_number_integer();
            if (ok) prod.product.factors.emplace_back(pair[0].get<int>(), pair[1].get<int>());
          }
          if (!ok) rd.fail(t + ".factors", "expected an array of [m, n] integer pairs");
        }
        prod.spin = read_spin(rd, pj, t);
        w.products.push_back(prod);
      }
    }
    return w;
  }
  if (key == "symmetrize") {
    SymmetrizeSource s;
    s.expr = rd.string(body, at, "expr", "0", true);
    s.depth = static_cast<int>(rd.integer(body, at, "depth", 3));
    return s;
  }
  if (key == "lattice_wrap") {
    LatticeWrapSource s;
    s.inner = rd.string(body, at, "inner", "z");
    s.width = rd.number(body, at, "width", 1.0, true);
    s.height = rd.number(body, at, "height", 1.0, true);
    return s;
  }
  rd.fail(at, "unknown function kind");
  return ExprSource{"z"};
}

Rgb read_color(Reader& rd, const json& obj, const std::string& where, Rgb fallback) {
  const json* v = rd.field(obj, where, "color", false);
  if (!v) return fallback;
  if (!v->is_array() || v->size() != 3) {
    rd.fail(where + ".color", "expected [r, g, b]");
    return fallback;
  }
  std::uint8_t out[3];
  for (int i = 0; i < 3; ++i) {
    const json& c = (*v)[i];
    if (!c.is_number_integer() || c.get<int>() < 0 || c.get<int>() > 255) {
      rd.fail(where + ".color", "channels must be integers in [0, 255]");
      return fallback;
    }
    out[i] = static_cast<std::uint8_t>(c.get<int>());
  }
  return {out[0], out[1], out[2]};
}

Overlay read_overlay(Reader& rd, const json& oj, const std::string& where) {
  Overlay ov;
  ov.color = read_color(rd, oj, where, ov.color);
  ov.stroke = rd.number(oj, where, "stroke", 1.0);
  const std::string type = rd.string(oj, where, "type", "", true);
  if (type == "ray") {
    ov.shape = Ray{rd.number(oj, where, "u", 0.0, true)};
  } else if (type == "vline") {
    ov.shape = VerticalLine{rd.number(oj, where, "u", 0.0, true)};
  } else if (type == "semicircle") {
    ov.shape = Semicircle{rd.number(oj, where, "r", 1.0, true), rd.number(oj, where, "u", 0.0, true)};
  } else if (type == "horocycle") {
    ov.shape = Horocycle{rd.number(oj, where, "r", 1.0, true), rd.number(oj, where, "u", 0.0, true)};
  } else if (type == "circle") {
    ov.shape = EuclideanCircle{rd.complex_field(oj, where, "center", {}, true), rd.number(oj, where, "radius", 1.0, true)};
  } else if (type == "lattice") {
    ov.shape = LatticeGrid{rd.complex_field(oj, where, "u", {1.0, 0.0}, true),
                           rd.complex_field(oj, where, "v", {0.0, 1.0}, true)};
  } else if (type == "geodesic") {
    const Complex z1 = rd.complex_field(oj, where, "z1", {0.0, 1.0}, true);
    const Complex z2 = rd.complex_field(oj, where, "z2", {0.0, 2.0}, true);
    if (z1 == z2 || !(z1.imag() > 0.0) || !(z2.imag() > 0.0)) {
      rd.fail(where, "geodesic needs two distinct points with positive imaginary part");
    } else {
      const Geodesic g = geodesic_through(z1, z2);
      if (const auto* ray = std::get_if<Ray>(&g)) {
        ov.shape = *ray;
      } else {
        ov.shape = std::get<Semicircle>(g);
      }
    }
  } else if (type == "hyperbolic_circle") {
    const Complex c = rd.complex_field(oj, where, "center", {0.0, 1.0}, true);
    const double rho = rd.number(oj, where, "rho", 1.0, true);
    if (!(c.imag() > 0.0) || !(rho > 0.0)) {
      rd.fail(where, "hyperbolic circle needs a centre in the upper half-plane and rho > 0");
    } else {
      ov.shape = hyperbolic_circle(c, rho);
    }
  } else if (!type.empty()) {
    rd.fail(where + ".type", "unknown overlay type '" + type + "'");
  }
  return ov;
}

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

json overlay_json(const Overlay& ov) {
  json j;
  struct Visitor {
    json& j;
    void operator()(const Ray& s) const { j["type"] = "ray", j["u"] = s.u; }
    void operator()(const VerticalLine& s) const { j["type"] = "vline", j["u"] = s.u; }
    void operator()(const Semicircle& s) const { j["type"] = "semicircle", j["r"] = s.r, j["u"] = s.u; }
    void operator()(const Horocycle& s) const { j["type"] = "horocycle", j["r"] = s.r, j["u"] = s.u; }
    void operator()(const EuclideanCircle& s) const {
      j["type"] = "circle", j["center"] = complex_json(s.center), j["radius"] = s.radius;
    }
    void operator()(const LatticeGrid& s) const {
      j["type"] = "lattice", j["u"] = complex_json(s.u), j["v"] = complex_json(s.v);
    }
  };
  std::visit(Visitor{j}, ov.shape);
  j["color"] = json::array({ov.color.r, ov.color.g, ov.color.b});
  j["stroke"] = ov.stroke;
  return j;
}

json function_json(const FunctionSource& fs) {
  struct Visitor {
    json operator()(const ExprSource& e) const { return {{"expr", e.text}}; }
    json operator()(const RosetteSource& r) const {
      json terms = json::array();
      for (const auto& t : r.terms) {
        json tj{{"a", complex_json(t.term.a)}, {"m", t.term.m}, {"n", t.term.n}};
        if (t.spin) tj["spin"] = *t.spin;
        terms.push_back(tj);
      }
      return {{"rosette", {{"fold", r.fold}, {"mirror_x", r.mirror_x}, {"terms", terms}}}};
    }
    json operator()(const WallpaperSource& w) const {
      json terms = json::array();
      for (const auto& t : w.terms) {
        json tj{{"a", complex_json(t.term.a)},
                {"m", t.term.m},
                {"n", t.term.n},
                {"pairing", pairing_name(t.term.pairing)}};
        if (t.spin) tj["spin"] = *t.spin;
        terms.push_back(tj);
      }
      json prods = json::array();
      for (const auto& p : w.products) {
        json factors = json::array();
        for (const auto& [m, n] : p.product.factors) factors.push_back(json::array({m, n}));
        json pj{{"a", complex_json(p.product.a)}, {"factors", factors}};
        if (p.spin) pj["spin"] = *p.spin;
        prods.push_back(pj);
      }
      return {{"wallpaper", {{"order", w.order}, {"terms", terms}, {"products", prods}}}};
    }
    json operator()(const SymmetrizeSource& s) const {
      return {{"symmetrize", {{"expr", s.expr}, {"depth", s.depth}}}};
    }
    json operator()(const LatticeWrapSource& s) const {
      return {{"lattice_wrap", {{"inner", s.inner}, {"width", s.width}, {"height", s.height}}}};
    }
  };
  return std::visit(Visitor{}, fs);
}

}  // namespace

DesignSpec parse_design_spec(std::string_view json_text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SpecError({std::string("json: ") + e.what()});
  }
  if (!root.is_object()) throw SpecError({"spec: top level must be an object"});

  Reader rd;
  DesignSpec spec;
  spec.base_dir = base_dir;
  spec.schema = static_cast<int>(rd.integer(root, "spec", "schema", 0, true));

  const std::string mode = rd.string(root, "spec", "mode", "euclidean");
  if (mode == "euclidean") {
    spec.mode = DesignMode::Euclidean;
  } else if (mode == "hyperbolic") {
    spec.mode = DesignMode::Hyperbolic;
  } else if (mode == "disk") {
    spec.mode = DesignMode::Disk;
  } else {
    rd.fail("spec.mode", "expected euclidean, hyperbolic or disk");
  }

  if (const json* fj = rd.field(root, "spec", "function", true)) spec.function = read_function(rd, *fj);

  const std::string lattice = rd.string(root, "spec", "lattice", "square");
  if (lattice == "square") {
    spec.lattice = Lattice::Square;
  } else if (lattice == "rhombic") {
    spec.lattice = Lattice::Rhombic;
  } else {
    rd.fail("spec.lattice", "expected square or rhombic");
  }

  if (const json* wj = rd.field(root, "spec", "window", true)) {
    const std::string at = "window";
    spec.window.x_min = rd.number(*wj, at, "x_min", -1.0, true);
    spec.window.x_max = rd.number(*wj, at, "x_max", 1.0, true);
    spec.window.y_min = rd.number(*wj, at, "y_min", -1.0, true);
    spec.window.y_max = rd.number(*wj, at, "y_max", 1.0, true);
    spec.window.width = static_cast<int>(rd.integer(*wj, at, "width", 1, true));
    spec.window.height = static_cast<int>(rd.integer(*wj, at, "height", 1, true));
  }

  if (const json* cj = rd.field(root, "spec", "colormap", false)) {
    spec.colormap.path = rd.string(*cj, "colormap", "path", spec.colormap.path);
    spec.colormap.scale_factor = rd.number(*cj, "colormap", "scale_factor", spec.colormap.scale_factor);
    spec.colormap.builtin_size = static_cast<int>(rd.integer(*cj, "colormap", "size", spec.colormap.builtin_size));
  }

  if (const json* pj = rd.field(root, "spec", "policy", false)) {
    const std::string kind = rd.string(*pj, "policy", "kind", "black");
    if (kind == "black") {
      spec.policy = BlackPolicy{};
    } else if (kind == "clamp") {
      spec.policy = ClampPolicy{};
    } else if (kind == "wrap") {
      spec.policy = WrapPolicy{rd.number(*pj, "policy", "period_u", 0.0, true),
                               rd.number(*pj, "policy", "period_v", 0.0, true)};
    } else {
      rd.fail("policy.kind", "expected black, wrap or clamp");
    }
  }

  if (const json* oj = rd.field(root, "spec", "overlays", false)) {
    if (!oj->is_array()) rd.fail("overlays", "expected an array");
    for (std::size_t i = 0; oj->is_array() && i < oj->size(); ++i) {
      spec.overlays.push_back(read_overlay(rd, (*oj)[i], "overlays[" + std::to_string(i) + "]"));
    }
  }

  if (const json* aj = rd.field(root, "spec", "animation", false)) {
    Animation anim;
    anim.theta = rd.number(*aj, "animation", "theta", anim.theta);
    anim.frames = static_cast<int>(rd.integer(*aj, "animation", "frames", anim.frames));
    spec.animation = anim;
  }

  const long long seed = rd.integer(root, "spec", "seed", 1);
  if (seed < 0) rd.fail("spec.seed", "must be non-negative");
  spec.seed = static_cast<std::uint64_t>(seed);
  spec.disk_pullback = rd.boolean(root, "spec", "disk_pullback", false);

  static const char* const kKnown[] = {"schema", "mode",      "function", "lattice", "window",       "colormap",
                                       "policy", "overlays",  "animation", "seed",   "disk_pullback", "comment"};
  for (const auto& [key, _] : root.items()) {
    bool known = false;
    for (const char* k : kKnown) known = known || key == k;
    if (!known) rd.fail("spec." + key, "unknown field");
  }

  if (!rd.problems.empty()) throw SpecError(rd.problems);
  validate_design_spec(spec);
  return spec;
}

DesignSpec load_design_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError({"cannot open " + path.string()});
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_design_spec(buf.str(), path.parent_path());
}

std::string serialize_design_spec(const DesignSpec& spec) {
  json root;
  root["schema"] = spec.schema;
  root["mode"] = mode_name(spec.mode);
  root["function"] = function_json(spec.function);
  root["lattice"] = spec.lattice == Lattice::Rhombic ? "rhombic" : "square";
  root["window"] = {{"x_min", spec.window.x_min}, {"x_max", spec.window.x_max}, {"y_min", spec.window.y_min},
                    {"y_max", spec.window.y_max}, {"width", spec.window.width}, {"height", spec.window.height}};
  root["colormap"] = {{"path", spec.colormap.path},
                      {"scale_factor", spec.colormap.scale_factor},
                      {"size", spec.colormap.builtin_size}};
  if (const auto* wrap = std::get_if<WrapPolicy>(&spec.policy)) {
    root["policy"] = {{"kind", "wrap"}, {"period_u", wrap->period_u}, {"period_v", wrap->period_v}};
  } else if (std::holds_alternative<ClampPolicy>(spec.policy)) {
    root["policy"] = {{"kind", "clamp"}};
  } else {
    root["policy"] = {{"kind", "black"}};
  }
  json overlays = json::array();
  for (const auto& ov : spec.overlays) overlays.push_back(overlay_json(ov));
  root["overlays"] = overlays;
  if (spec.animation) root["animation"] = {{"theta", spec.animation->theta}, {"frames", spec.animation->frames}};
  root["seed"] = spec.seed;
  root["disk_pullback"] = spec.disk_pullback;
  return root.dump(2) + "\n";
}

namespace {

void check_expr(std::vector<std::string>& problems, const std::string& where, const std::string& text) {
  try {
    parse_expression(text);
  } catch (const ParseError& e) {
    problems.push_back(where + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    problems.push_back(where + ": " + e.what());
  }
}

template <typename Fn>
void check_builder(std::vector<std::string>& problems, const std::string& where, Fn&& build) {
  try {
    build();
  } catch (const std::invalid_argument& e) {
    problems.push_back(where + ": " + e.what());
  }
}

std::vector<RosetteTerm> rosette_terms(const RosetteSource& r) {
  std::vector<RosetteTerm> out;
  for (const auto& t : r.terms) out.push_back(t.term);
  return out;
}

}  // namespace

bool has_animated_terms(const DesignSpec& spec) {
  if (const auto* r = std::get_if<RosetteSource>(&spec.function)) {
    bool any_explicit = false;
    for (const auto& t : r->terms) any_explicit = any_explicit || t.spin.has_value();
    for (const auto& t : r->terms) {
      const int s = any_explicit ? t.spin.value_or(0) : (t.term.m + t.term.n > 0) - (t.term.m + t.term.n < 0);
      if (s != 0) return true;
    }
    return false;
  }
  if (const auto* w = std::get_if<WallpaperSource>(&spec.function)) {
    for (const auto& t : w->terms) {
      if (t.spin.value_or(0) != 0) return true;
    }
    for (const auto& p : w->products) {
      if (p.spin.value_or(0) != 0) return true;
    }
  }
  return false;
}

void validate_design_spec(const DesignSpec& spec) {
  std::vector<std::string> problems;
  if (spec.schema != 1) problems.push_back("spec.schema: only schema 1 is supported");

  try {
    validate_window(spec.window, spec.mode == DesignMode::Hyperbolic);
  } catch (const std::invalid_argument& e) {
    problems.push_back(std::string("window: ") + e.what());
  }
  if (spec.mode == DesignMode::Disk) {
    const Window& w = spec.window;
    if (w.x_min != -1.0 || w.x_max != 1.0 || w.y_min != -1.0 || w.y_max != 1.0) {
      problems.push_back("window: disk mode requires the window [-1, 1] x [-1, 1]");
    }
  }
  if (spec.disk_pullback && spec.mode != DesignMode::Disk) {
    problems.push_back("spec.disk_pullback: only meaningful in disk mode");
  }

  if (!(spec.colormap.scale_factor > 0.0) || !std::isfinite(spec.colormap.scale_factor)) {
    problems.push_back("colormap.scale_factor: must be positive and finite");
  }
  if (spec.colormap.path.empty()) problems.push_back("colormap.path: must not be empty");
  if (spec.colormap.path.rfind(kBuiltinPrefix, 0) == 0) {
    const std::string name = spec.colormap.path.substr(kBuiltinPrefix.size());
    bool known = false;
    for (const auto& n : builtin_colormap_names()) known = known || n == name;
    if (!known) problems.push_back("colormap.path: unknown builtin colour map '" + name + "'");
    if (spec.colormap.builtin_size < 2 || spec.colormap.builtin_size > 8192) {
      problems.push_back("colormap.size: must be in [2, 8192]");
    }
  }

  try {
    validate_policy(spec.policy);
  } catch (const std::invalid_argument& e) {
    problems.push_back(std::string("policy: ") + e.what());
  }

  struct FunctionCheck {
    std::vector<std::string>& problems;
    void operator()(const ExprSource& e) const { check_expr(problems, "function.expr", e.text); }
    void operator()(const RosetteSource& r) const {
      check_builder(problems, "function.rosette", [&] { build_rosette(r.fold, rosette_terms(r), r.mirror_x); });
    }
    void operator()(const WallpaperSource& w) const {
      check_builder(problems, "function.wallpaper", [&] {
        std::vector<WallpaperTerm> terms;
        std::vector<WallpaperProduct> prods;
        for (const auto& t : w.terms) terms.push_back(t.term);
        for (const auto& p : w.products) prods.push_back(p.product);
        build_wallpaper(w.order, terms, prods);
      });
    }
    void operator()(const SymmetrizeSource& s) const {
      check_expr(problems, "function.symmetrize.expr", s.expr);
      if (s.depth < 0 || s.depth > kMaxGammaDepth) {
        problems.push_back("function.symmetrize.depth: must be in [0, " + std::to_string(kMaxGammaDepth) + "]");
      }
    }
    void operator()(const LatticeWrapSource& s) const {
      check_expr(problems, "function.lattice_wrap.inner", s.inner);
      if (!(s.width > 0.0) || !(s.height > 0.0)) {
        problems.push_back("function.lattice_wrap: width and height must be positive");
      }
    }
  };
  std::visit(FunctionCheck{problems}, spec.function);

  for (std::size_t i = 0; i < spec.overlays.size(); ++i) {
    if (!(spec.overlays[i].stroke >= 1.0)) {
      problems.push_back("overlays[" + std::to_string(i) + "].stroke: must be >= 1 pixel");
    }
  }

  if (spec.animation) {
    if (!(spec.animation->theta > 0.0) || !std::isfinite(spec.animation->theta)) {
      problems.push_back("animation.theta: must be positive");
    }
    if (spec.animation->frames < 1) problems.push_back("animation.frames: must be >= 1");
    if (!has_animated_terms(spec)) {
      problems.push_back("animation: the function has no terms with a non-zero spin");
    }
  }

  if (!problems.empty()) throw SpecError(problems);
}

BuiltFunction build_function(const DesignSpec& spec, int frame) {
  const double theta = spec.animation ? spec.animation->theta : 0.0;
  if (frame != 0 && !spec.animation) throw std::invalid_argument("build_function: frames need an animation block");
  auto rotate = [&](Complex a, int spin) {
    const long long turns = static_cast<long long>(spin) * frame;
    if (turns == 0) return a;
    return a * std::polar(1.0, static_cast<double>(turns) * theta);
  };

  BuiltFunction out;
  struct Visitor {
    const DesignSpec& spec;
    BuiltFunction& out;
    const std::function<Complex(Complex, int)>& rotate;

    void from_expr(const Expr& e, EvalEnv env) {
      out.expr = e;
      out.env = env;
      auto compiled = std::make_shared<const CompiledExpr>(e, env);
      out.fn = [compiled](Complex z) { return (*compiled)(z); };
    }
    void operator()(const ExprSource& s) { from_expr(parse_expression(s.text), EvalEnv{spec.lattice}); }
    void operator()(const RosetteSource& r) {
      bool any_explicit = false;
      for (const auto& t : r.terms) any_explicit = any_explicit || t.spin.has_value();
      std::vector<RosetteTerm> terms;
      for (const auto& t : r.terms) {
        const int sum = t.term.m + t.term.n;
        const int spin = any_explicit ? t.spin.value_or(0) : (sum > 0) - (sum < 0);
        terms.push_back({rotate(t.term.a, spin), t.term.m, t.term.n});
      }
      from_expr(build_rosette(r.fold, terms, r.mirror_x), EvalEnv{Lattice::Square});
    }
    void operator()(const WallpaperSource& w) {
      std::vector<WallpaperTerm> terms;
      std::vector<WallpaperProduct> prods;
      for (const auto& t : w.terms) {
        WallpaperTerm term = t.term;
        term.a = rotate(term.a, t.spin.value_or(0));
        terms.push_back(term);
      }
      for (const auto& p : w.products) {
        WallpaperProduct prod = p.product;
        prod.a = rotate(prod.a, p.spin.value_or(0));
        prods.push_back(prod);
      }
      const WallpaperFunction built = build_wallpaper(w.order, terms, prods);
      from_expr(built.expr, built.env);
    }
    void operator()(const SymmetrizeSource& s) {
      auto sym = std::make_shared<const SymmetrizedFunction>(parse_expression(s.expr), s.depth);
      out.env = EvalEnv{};
      out.fn = [sym](Complex z) { return (*sym)(z); };
    }
    void operator()(const LatticeWrapSource& s) {
      auto inner = std::make_shared<const CompiledExpr>(parse_expression(s.inner));
      const double width = s.width;
      const double height = s.height;
      out.env = EvalEnv{};
      out.fn = [inner, width, height](Complex z) {
        const Complex v = (*inner)(z);
        return is_finite(v) ? lattice_wrap(v, width, height) : v;
      };
    }
  };
  const std::function<Complex(Complex, int)> rotate_fn = rotate;
  Visitor visitor{spec, out, rotate_fn};
  std::visit(visitor, spec.function);

  if (spec.mode == DesignMode::Disk) {
    PlaneFunction inner = std::move(out.fn);
    const bool pullback = spec.disk_pullback;
    out.fn = [inner, pullback](Complex z) {
      if (std::norm(z) >= 1.0) return nonfinite_marker();
      return inner(pullback ? cayley_from_disk(z) : z);
    };
  }
  return out;
}

ColorMap load_colormap(const DesignSpec& spec) {
  const std::string& path = spec.colormap.path;
  if (path.rfind(kBuiltinPrefix, 0) == 0) {
    auto img = builtin_colormap(path.substr(kBuiltinPrefix.size()), spec.colormap.builtin_size);
    if (!img) throw SpecError({"colormap.path: unknown builtin colour map"});
    return ColorMap(std::move(*img), spec.colormap.scale_factor);
  }
  std::filesystem::path file(path);
  if (file.is_relative() && !spec.base_dir.empty()) file = spec.base_dir / file;
  return ColorMap(read_png(file), spec.colormap.scale_factor);
}

RasterImage render_design(const DesignSpec& spec, const ColorMap& cmap, int frame, const RunOptions& options) {
  const BuiltFunction built = build_function(spec, frame);
  RenderOptions ropts;
  ropts.workers = options.workers;
  ropts.upper_half_plane = spec.mode == DesignMode::Hyperbolic;
  RasterImage img = render(built.fn, spec.window, cmap, spec.policy, ropts);
  if (!spec.overlays.empty()) img = draw_overlays(std::move(img), spec.window, spec.overlays);
  return img;
}

RasterImage run_design(const DesignSpec& spec, const std::filesystem::path& out, const RunOptions& options) {
  validate_design_spec(spec);
  const ColorMap cmap = load_colormap(spec);
  RasterImage img = render_design(spec, cmap, 0, options);
  if (!out.empty()) write_png(out, img);
  return img;
}

}  // namespace symart
