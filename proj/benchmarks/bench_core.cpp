#include <benchmark/benchmark.h>

#include <vector>

#include "foliage/gamma.hpp"
#include "foliage/stochastic.hpp"

namespace {

using namespace foliage;

void BM_JetMultiply(benchmark::State& state) {
  const int dims = static_cast<int>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  std::vector<double> p(static_cast<std::size_t>(dims), 0.3);
  const auto x = coordinateJets(p, order);
  const Jet a = x[0] * x[1] + sin(x[0]);
  const Jet b = exp(x[1]) + x[0] * x[0];
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_JetMultiply)->Args({3, 2})->Args({3, 4})->Args({5, 3})->Args({6, 4});

void BM_LocalGeometry(benchmark::State& state, FoliationModel (*make)()) {
  const FoliationModel model = make();
  const auto p = model.samplePoints(1, 7).front();
  for (auto _ : state) benchmark::DoNotOptimize(LocalGeometry(model, p));
}
BENCHMARK_CAPTURE(BM_LocalGeometry, heisenberg1, [] { return heisenbergModel(1); });
BENCHMARK_CAPTURE(BM_LocalGeometry, heisenberg2, [] { return heisenbergModel(2); });
BENCHMARK_CAPTURE(BM_LocalGeometry, su2, [] { return su2Model(1.0); });

void BM_BoxEpsilon(benchmark::State& state) {
  const FoliationModel model = su2Model(1.0);
  const auto p = model.samplePoints(1, 7).front();
  const LocalGeometry geo(model, p);
  const FormJet eta = evaluate(geo, randomOneForm(3, 3, 11));
  for (auto _ : state) benchmark::DoNotOptimize(boxEpsilon(geo, eta, 1.0));
}
BENCHMARK(BM_BoxEpsilon);

void BM_PathStepping(benchmark::State& state) {
  const FoliationModel model = heisenbergModel(1);
  DiffusionParams params;
  params.paths = 100;
  params.t = 0.1;
  const bool transport = state.range(0) != 0;
  const std::vector<double> x0{0.3, -0.2, 0.1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(transport ? simulatePaths(model, x0, params, 1.0) : simulatePaths(model, x0, params));
  }
  state.SetItemsProcessed(state.iterations() * params.paths * params.steps());
}
BENCHMARK(BM_PathStepping)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
