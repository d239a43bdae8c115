#include <benchmark/benchmark.h>

#include "pwlab/curves.hpp"
#include "pwlab/geometry.hpp"
#include "pwlab/quaternionic.hpp"
#include "pwlab/suites.hpp"

using namespace pwlab;

namespace {

MetricSpec coupled(int n) {
  MetricSpec s = singular_spec(4.0, n);
  for (auto& c : s.couplings) c.holomorphic = {{0.2, 0.1}, {0.5, -0.3}, {0.0, 0.25}, {0.1, 0.1}};
  return s;
}

void BM_Riemann(benchmark::State& state) {
  const MetricSpec s = coupled(int(state.range(0)));
  const Point p = sample_points(2 * s.n + 4, 1, 3)[0];
  for (auto _ : state) benchmark::DoNotOptimize(riemann(s, p));
}
BENCHMARK(BM_Riemann)->DenseRange(0, 2);

void BM_NablaRiemann(benchmark::State& state) {
  const MetricSpec s = coupled(int(state.range(0)));
  const Point p = sample_points(2 * s.n + 4, 1, 3)[0];
  for (auto _ : state) benchmark::DoNotOptimize(nabla_riemann(s, p));
}
BENCHMARK(BM_NablaRiemann)->DenseRange(0, 2);

// Radial geodesic into the singular set.
void BM_GeodesicSingular(benchmark::State& state) {
  const MetricSpec s = singular_spec(4.0);
  GeodesicState init{Point::Zero(4), Vec::Zero(4)};
  init.x[0] = 1.0;
  init.v[0] = -1.0;
  for (auto _ : state) benchmark::DoNotOptimize(geodesic_integrate(s, init, 2.0));
}
BENCHMARK(BM_GeodesicSingular)->Unit(benchmark::kMillisecond);

void BM_GeodesicComplete(benchmark::State& state) {
  const MetricSpec s = cahen_wallach_spec(1.0);
  GeodesicState init{Point::Zero(4), Vec::Zero(4)};
  init.x[0] = 1.0;
  init.v[0] = 0.3;
  init.v[1] = 0.5;
  init.v[2] = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(geodesic_integrate(s, init, 100.0));
}
BENCHMARK(BM_GeodesicComplete)->Unit(benchmark::kMillisecond);

void BM_WedgeKernel(benchmark::State& state) {
  const int p = int(state.range(0));
  RVec xi(size_t(4 * (p + 1)), Rational(0));
  xi[0] = 1;
  xi[size_t(4 * p)] = 1;
  for (auto _ : state) benchmark::DoNotOptimize(flatness_report(p, 1, xi));
}
BENCHMARK(BM_WedgeKernel)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
