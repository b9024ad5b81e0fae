// Serial reference vs OpenMP kernels: Gram assembly, prediction, u_G sampling.
// Run with --benchmark_min_time=0.1s for a quick pass.

#include <benchmark/benchmark.h>

#include "anchored/experiments.hpp"
#include "anchored/kernels.hpp"
#include "anchored/pde.hpp"
#include "anchored/regression.hpp"
#include "anchored/rng.hpp"

using namespace anchored;

namespace {

LambdaKernel bench_kernel(int d) {
  const auto family = order_family(d, 2);
  std::vector<UnivariateKernel> factors;
  for (int j = 0; j < d; ++j) factors.push_back(make_anchored_h1(0.5, 0.0, 1.0));
  return LambdaKernel(family, std::vector<double>(family.size(), 1.0), std::move(factors));
}

std::vector<Point> bench_points(int n, int d, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) {
    Point p;
    for (int j = 0; j < d; ++j) p.push_back(rng.uniform01());
    pts.push_back(std::move(p));
  }
  return pts;
}

void BM_gram_serial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto kernel = bench_kernel(6);
  const auto X = bench_points(n, 6, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gram_serial(kernel, X, X));
  }
}

void BM_gram_parallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto kernel = bench_kernel(6);
  const auto X = bench_points(n, 6, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gram(kernel, X, X));
  }
}

void BM_predict_serial(benchmark::State& state) {
  const auto kernel = bench_kernel(6);
  const auto X = bench_points(200, 6, 2);
  std::vector<double> y(X.size(), 1.0);
  const auto model = fit_plain(kernel, X, y, 1e-4);
  const auto T = bench_points(static_cast<int>(state.range(0)), 6, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.predict_serial(T));
  }
}

void BM_predict_parallel(benchmark::State& state) {
  const auto kernel = bench_kernel(6);
  const auto X = bench_points(200, 6, 2);
  std::vector<double> y(X.size(), 1.0);
  const auto model = fit_plain(kernel, X, y, 1e-4);
  const auto T = bench_points(static_cast<int>(state.range(0)), 6, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.predict(T));
  }
}

void BM_sample_ug_serial(benchmark::State& state) {
  const auto problem = DiffusionProblem::standard_affine(6, 0.1, 2.0);
  QoiSpec spec;
  Rng rng(4);
  std::vector<Point> pts;
  for (int i = 0; i < static_cast<int>(state.range(0)); ++i) {
    Point p;
    for (int j = 0; j < 6; ++j) p.push_back(rng.uniform(-0.5, 0.5));
    pts.push_back(std::move(p));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_ug_serial(problem, spec, pts, 100));
  }
}

void BM_sample_ug_parallel(benchmark::State& state) {
  const auto problem = DiffusionProblem::standard_affine(6, 0.1, 2.0);
  QoiSpec spec;
  Rng rng(4);
  std::vector<Point> pts;
  for (int i = 0; i < static_cast<int>(state.range(0)); ++i) {
    Point p;
    for (int j = 0; j < 6; ++j) p.push_back(rng.uniform(-0.5, 0.5));
    pts.push_back(std::move(p));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_ug(problem, spec, pts, 100));
  }
}

}  // namespace

BENCHMARK(BM_gram_serial)->Arg(200)->Arg(800);
BENCHMARK(BM_gram_parallel)->Arg(200)->Arg(800);
BENCHMARK(BM_predict_serial)->Arg(1024)->Arg(4096);
BENCHMARK(BM_predict_parallel)->Arg(1024)->Arg(4096);
BENCHMARK(BM_sample_ug_serial)->Arg(256);
BENCHMARK(BM_sample_ug_parallel)->Arg(256);

BENCHMARK_MAIN();
