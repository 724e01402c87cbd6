#include <benchmark/benchmark.h>

#include "cramer/measures.hpp"
#include "cramer/moments.hpp"
#include "cramer/parallel.hpp"

using namespace cramer;

namespace {

void BM_Sample(benchmark::State& state) {
  const MeasureModel m = isotropic_zoo(4)[static_cast<std::size_t>(state.range(0))].model;
  for (auto _ : state) benchmark::DoNotOptimize(m.sample(1, 4096));
  state.SetItemsProcessed(state.iterations() * 4096);
  state.SetLabel(m.name());
}
BENCHMARK(BM_Sample)->DenseRange(0, 3);

void BM_ExponentialMarginalCdf(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const MeasureModel m = MeasureModel::product_exponential(n);
  const DirectionalMarginal g = m.marginal(Vector::Constant(n, 1.0 / std::sqrt(n)));
  double s = -1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(g.sf(s));
    s = s > 3.0 ? -1.0 : s + 0.01;
  }
}
BENCHMARK(BM_ExponentialMarginalCdf)->DenseRange(2, 8, 2);

void BM_LpMoment(benchmark::State& state) {
  const MeasureModel m = MeasureModel::uniform_cube(3, 1.0);
  const Parallel par(static_cast<unsigned>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lp_moment(m, 1.0, 2, 10000, MomentEstimator::DirectMC, par));
}
BENCHMARK(BM_LpMoment)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
