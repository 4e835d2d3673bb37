#include <benchmark/benchmark.h>

#include <random>

#include "symart/euclid.hpp"
#include "symart/modular.hpp"
#include "symart/png_io.hpp"
#include "symart/render.hpp"

using namespace symart;

namespace {

std::vector<Complex> sample_points(std::size_t n, double lo_y = -2.0) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> x(-2.0, 2.0), y(lo_y, 2.0);
  std::vector<Complex> out(n);
  for (auto& z : out) z = {x(rng), y(rng)};
  return out;
}

const Expr& four_fold() {
  static const Expr e = build_wallpaper(4, presets::four_fold_wallpaper()).expr;
  return e;
}

void BM_TreeWalkEval(benchmark::State& state) {
  const auto pts = sample_points(1024);
  for (auto _ : state) {
    for (Complex z : pts) benchmark::DoNotOptimize(evaluate(four_fold(), z));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size()));
}
BENCHMARK(BM_TreeWalkEval);

void BM_CompiledEval(benchmark::State& state) {
  const auto pts = sample_points(1024);
  const CompiledExpr f(four_fold());
  for (auto _ : state) {
    for (Complex z : pts) benchmark::DoNotOptimize(f(z));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size()));
}
BENCHMARK(BM_CompiledEval);

void BM_RenderRosette(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const CompiledExpr f(build_rosette(6, presets::six_fold_rosette(), false));
  const ColorMap cmap(*builtin_colormap("smooth", 512), 10.0);
  const Window w{-2, 2, -2, 2, size, size};
  for (auto _ : state) {
    benchmark::DoNotOptimize(render([&](Complex z) { return f(z); }, w, cmap, WrapPolicy{1000, 1000}, {1, false}));
  }
  state.SetItemsProcessed(state.iterations() * size * size);
}
BENCHMARK(BM_RenderRosette)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Symmetrized(benchmark::State& state) {
  const Expr f = parse_expression(
      "2*i*((z - conj(z))/(2*i))*cos(pi*(z + conj(z))) + 2*((z - conj(z))/(2*i))*sin(2*pi*((z - conj(z))/(2*i))/3)");
  const SymmetrizedFunction g(f, static_cast<int>(state.range(0)));
  const auto pts = sample_points(256, 0.05);
  for (auto _ : state) {
    for (Complex z : pts) benchmark::DoNotOptimize(g(z));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size()));
}
BENCHMARK(BM_Symmetrized)->DenseRange(1, 4);

void BM_Reduction(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> x(-50.0, 50.0), logy(std::log(1e-3), std::log(1e3));
  std::vector<Complex> pts(1024);
  for (auto& z : pts) z = {x(rng), std::exp(logy(rng))};
  for (auto _ : state) {
    for (Complex z : pts) benchmark::DoNotOptimize(reduce_to_fundamental_domain(z));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size()));
}
BENCHMARK(BM_Reduction);

void BM_CoprimeTree(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(coprime_tree(2, 1, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_CoprimeTree)->Arg(6)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
