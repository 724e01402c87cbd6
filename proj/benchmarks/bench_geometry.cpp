#include <benchmark/benchmark.h>

#include "cramer/bodies.hpp"
#include "cramer/depth.hpp"
#include "cramer/directions.hpp"
#include "cramer/polytopes.hpp"

using namespace cramer;

namespace {

void BM_Radial(benchmark::State& state) {
  const auto family = static_cast<Family>(state.range(0));
  const MeasureModel m = MeasureModel::product_exponential(3);
  const auto dirs = sphere_directions(3, 32);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(radial(m, {family, 4.0}, dirs[i]));
    i = (i + 1) % dirs.size();
  }
  state.SetLabel(to_string(family));
}
BENCHMARK(BM_Radial)->DenseRange(0, 4)->Unit(benchmark::kMicrosecond);

void BM_DepthSphereSearch(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const MeasureModel m = MeasureModel::uniform_cube(n, 1.0);
  DepthOptions opt;
  opt.allow_closed_form = false;
  const Matrix xs = m.sample(5, 16);
  Eigen::Index i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(depth(m, xs.col(i), opt).value);
    i = (i + 1) % xs.cols();
  }
}
BENCHMARK(BM_DepthSphereSearch)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

// polygon lookup (n = 2) against the simplex feasibility route (n = 3)
void BM_HullMembership(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto N = static_cast<std::size_t>(state.range(1));
  const MeasureModel m = MeasureModel::isotropic_gaussian(n);
  const HullInstance hull(draw_vertices(m, N, 7, 0).vertices);
  const Matrix xs = m.sample(8, 256);
  Eigen::Index i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hull.contains(xs.col(i)));
    i = (i + 1) % xs.cols();
  }
}
BENCHMARK(BM_HullMembership)->ArgsProduct({{2, 3}, {50, 1000, 8000}});

}  // namespace

BENCHMARK_MAIN();
