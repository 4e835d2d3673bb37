#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "symart/design.hpp"
#include "symart/expr.hpp"
#include "symart/modular.hpp"
#include "symart/verify.hpp"

namespace symart::cli {

namespace {

std::pair<double, double> parse_pair(const std::string& text, const char* what) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw std::invalid_argument(std::string(what) + ": expected two comma-separated numbers");
  std::size_t used_a = 0, used_b = 0;
  const std::string a = text.substr(0, comma);
  const std::string b = text.substr(comma + 1);
  double x = 0, y = 0;
  try {
    x = std::stod(a, &used_a);
    y = std::stod(b, &used_b);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(what) + ": '" + text + "' is not a pair of numbers");
  }
  if (used_a != a.size() || used_b != b.size()) {
    throw std::invalid_argument(std::string(what) + ": '" + text + "' is not a pair of numbers");
  }
  return {x, y};
}

std::string format_complex(Complex z) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.15g %c %.15gi", z.real(), z.imag() < 0 ? '-' : '+', std::fabs(z.imag()));
  return buf;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symmetric image generator: domain colouring with Euclidean and hyperbolic symmetry", "symart"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string output;
  int threads = 0;
  bool parallel_frames = false;

  auto* render_cmd = app.add_subcommand("render", "Render a design spec to a PNG");
  render_cmd->add_option("spec", spec_path, "Design spec (JSON)")->required();
  render_cmd->add_option("-o,--output", output, "Output PNG path")->required();
  render_cmd->add_option("-j,--threads", threads, "Worker threads (0 = all cores)");

  auto* animate_cmd = app.add_subcommand("animate", "Render the animation frames of a design spec");
  animate_cmd->add_option("spec", spec_path, "Design spec (JSON) with an animation block")->required();
  animate_cmd->add_option("-o,--output", output, "Output directory")->required();
  animate_cmd->add_option("-j,--threads", threads, "Worker threads per frame (0 = all cores)");
  animate_cmd->add_flag("--parallel-frames", parallel_frames, "Render several frames at once");

  std::string suite = "all";
  auto* verify_cmd = app.add_subcommand("verify", "Run the built-in symmetry and geometry checks");
  verify_cmd->add_option("--suite", suite, "euclid, hyperbolic or all")
      ->check(CLI::IsMember({"euclid", "hyperbolic", "all"}));

  std::string root = "2,1";
  int depth = 2;
  auto* tree_cmd = app.add_subcommand("tree", "List a coprime tree with Bezout coefficients");
  tree_cmd->add_option("--root", root, "2,1 or 3,1")->check(CLI::IsMember({"2,1", "3,1"}));
  tree_cmd->add_option("--depth", depth, "Tree depth")->check(CLI::Range(0, kMaxTreeDepth));

  std::string point;
  auto* reduce_cmd = app.add_subcommand("reduce", "Reduce a point of the upper half-plane to the fundamental domain");
  reduce_cmd->add_option("--point", point, "x,y with y > 0")->required();

  std::string expr_text;
  auto* parse_cmd = app.add_subcommand("parse", "Check an expression and print its canonical form");
  parse_cmd->add_option("--check", expr_text, "Expression in z")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalid;
  }

  try {
    if (*render_cmd) {
      const DesignSpec spec = load_design_spec(spec_path);
      const RasterImage img = run_design(spec, output, RunOptions{threads});
      out << "wrote " << output << " (" << img.width() << "x" << img.height() << ")\n";
      return kExitOk;
    }
    if (*animate_cmd) {
      const DesignSpec spec = load_design_spec(spec_path);
      const FrameSequence seq = animate(spec, output, AnimateOptions{threads, parallel_frames});
      out << "wrote " << seq.files.size() << " frames and manifest.json to " << output << "\n";
      return kExitOk;
    }
    if (*verify_cmd) {
      const VerifySuite which = suite == "euclid"       ? VerifySuite::Euclid
                                : suite == "hyperbolic" ? VerifySuite::Hyperbolic
                                                        : VerifySuite::All;
      const auto results = run_verify_suite(which);
      std::size_t failed = 0;
      for (const auto& r : results) {
        out << (r.passed ? "PASS " : "FAIL ") << r.suite << ": " << r.name << " - " << r.detail << "\n";
        if (!r.passed) ++failed;
      }
      out << results.size() - failed << "/" << results.size() << " checks passed\n";
      return failed == 0 ? kExitOk : kExitInvalid;
    }
    if (*tree_cmd) {
      const auto [j, k] = parse_pair(root, "--root");
      out << "depth j k bezout_u bezout_v\n";
      for (const auto& node : coprime_tree(static_cast<std::int64_t>(j), static_cast<std::int64_t>(k), depth)) {
        out << node.depth << " " << node.j << " " << node.k << " " << node.bezout_u << " " << node.bezout_v << "\n";
      }
      return kExitOk;
    }
    if (*reduce_cmd) {
      const auto [x, y] = parse_pair(point, "--point");
      if (!(y > 0.0)) throw std::invalid_argument("--point: y must be positive");
      const Reduction red = reduce_to_fundamental_domain({x, y});
      std::string powers;
      for (std::size_t i = 0; i < red.word.powers.size(); ++i) {
        powers += (i ? "," : "") + std::to_string(red.word.powers[i]);
      }
      out << "w = " << format_complex(red.w) << "\n";
      out << "word = " << to_string(red.word) << "\n";
      out << "powers = [" << powers << "]\n";
      out << "matrix = " << to_string(to_matrix(red.word)) << "\n";
      return kExitOk;
    }
    if (*parse_cmd) {
      const Expr e = parse_expression(expr_text);
      out << to_string(e) << "\n";
      return kExitOk;
    }
  } catch (const SpecError& e) {
    err << e.what() << "\n";
    return kExitInvalid;
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    if (*parse_cmd) {
      err << "  " << expr_text << "\n  " << std::string(e.offset(), ' ') << "^\n";
    }
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "fault: " << e.what() << "\n";
    return kExitFault;
  }
  return kExitInvalid;
}

}  // namespace symart::cli
