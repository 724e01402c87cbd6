#include <benchmark/benchmark.h>

#include "cramer/cramer.hpp"
#include "cramer/measures.hpp"

using namespace cramer;

namespace {

MeasureModel model_for(int which, int n) {
  switch (which) {
    case 0: return MeasureModel::isotropic_gaussian(n);
    case 1: return MeasureModel::uniform_cube(n, 1.0);
    case 2: return MeasureModel::volume_one_ball(n);
    default: return MeasureModel::product_exponential(n);
  }
}

void BM_CramerTransform(benchmark::State& state) {
  const int n = static_cast<int>(state.range(1));
  const MeasureModel m = model_for(static_cast<int>(state.range(0)), n);
  const Matrix xs = m.sample(3, 64);
  Eigen::Index i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cramer_value(m, xs.col(i)));
    i = (i + 1) % xs.cols();
  }
  state.SetLabel(m.name());
}
BENCHMARK(BM_CramerTransform)->ArgsProduct({{0, 1, 2, 3}, {2, 4, 8}});

void BM_LogLaplaceHessian(benchmark::State& state) {
  const MeasureModel m = model_for(static_cast<int>(state.range(0)), 4);
  const Vector xi = Vector::Constant(4, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(m.log_laplace(xi, LaplaceOrder::Hessian));
  state.SetLabel(m.name());
}
BENCHMARK(BM_LogLaplaceHessian)->DenseRange(0, 3);

void BM_Biconjugate(benchmark::State& state) {
  const MeasureModel m = MeasureModel::product_exponential(1);
  const Vector xi = Vector::Constant(1, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(biconjugate_residual(m, xi));
}
BENCHMARK(BM_Biconjugate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
