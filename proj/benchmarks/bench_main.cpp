#include <benchmark/benchmark.h>

#include <algorithm>
#include <memory>

#include "tempergap/autocorrelation.hpp"
#include "tempergap/chain.hpp"
#include "tempergap/lyapunov.hpp"
#include "tempergap/spectral.hpp"

using namespace tempergap;

namespace {

void BM_MrwStep(benchmark::State& state) {
  const auto pot = builtin_potential("DW2", {{"c_y", 6.0}, {"mu", 0.1}});
  RngStream rng(1, 0);
  auto x = wrap({0.0, 0.0});
  for (auto _ : state) {
    x = mrw_step(pot, 0.1, 0.01, x, rng);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_MrwStep);

void BM_PtStep(benchmark::State& state) {
  const auto pot = builtin_potential("DW1");
  const auto ladder = build_ladder(1.0, 1.0 / static_cast<double>(state.range(0)), 1.0, 0.5);
  PTState s;
  s.replicas.assign(ladder.levels(), wrap({0.0}));
  RngStream rng(2, 0);
  for (auto _ : state) {
    s = pt_step(pot, ladder, std::move(s), rng);
    benchmark::DoNotOptimize(s);
  }
  state.counters["levels"] = ladder.levels();
}
BENCHMARK(BM_PtStep)->Arg(5)->Arg(10)->Arg(20);

void BM_GapDense(benchmark::State& state) {
  const auto k = discretize_mrw_1d(builtin_potential("DW1"), 0.2, 0.05, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_gap(k, EigenMethod::Dense).gap);
}
BENCHMARK(BM_GapDense)->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_GapLanczosSt(benchmark::State& state) {
  const auto k = discretize_st(builtin_potential("DW1"), build_ladder(1.0, 1.0 / static_cast<double>(state.range(0)), 1.0, 0.5), 256);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_gap(k, EigenMethod::Iterative).gap);
  state.counters["states"] = k.size();
}
BENCHMARK(BM_GapLanczosSt)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Autocorrelation(benchmark::State& state) {
  RngStream rng(3, 0);
  std::vector<double> x(static_cast<std::size_t>(state.range(0)));
  double v = 0.0;
  for (double& e : x) e = v = 0.95 * v + rng.uniform(-1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(autocorrelation(x, 1000));
}
BENCHMARK(BM_Autocorrelation)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

void BM_DriftAt(benchmark::State& state) {
  static const auto geom = [] {
    const BasinClassifier cls(builtin_potential("DW2", {{"c_y", 6.0}, {"mu", 0.1}}));
    return std::make_shared<const BasinGeometry>(extract_boundary(cls, 0.01));
  }();
  const auto& saddles = geom->classifier().boundary_saddles();
  const auto& saddle =
      *std::min_element(saddles.begin(), saddles.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
  const auto pp = build_perturbation(geom, build_saddle_frame(*geom, saddle), 0.03, 0.05);
  const auto t = drift_target(pp);
  DriftParams p;
  p.eps = 0.05;
  p.h = 0.05 * 0.05 * 0.05;
  p.scheme = state.range(0) == 0 ? QuadratureScheme::TensorGrid : QuadratureScheme::MonteCarlo;
  const auto x = wrap({0.75 + 0.5 * p.h, 0.0});
  for (auto _ : state) benchmark::DoNotOptimize(drift_at(t, p, x).drift);
  state.SetLabel(state.range(0) == 0 ? "tensor-grid" : "monte-carlo");
}
BENCHMARK(BM_DriftAt)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
