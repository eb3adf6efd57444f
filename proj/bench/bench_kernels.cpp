#include <benchmark/benchmark.h>

#include <random>

#include "rumin/spectral.hpp"

using namespace rumin;

namespace {

Mat random_matrix(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Mat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

// Coframe basis with one unit entry per column, like the bidegree bases.
Mat selection(Eigen::Index rows, Eigen::Index cols) {
  Mat b = Mat::Zero(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) b((2 * j + 1) % rows, j) = 1.0;
  return b;
}

template <kernels::Exec E>
void BM_KronSandwich(benchmark::State& state) {
  const Eigen::Index dim = state.range(0);
  const Eigen::Index coframe = 8;
  const Mat a = random_matrix(coframe * dim, coframe * dim, 7);
  const Mat bt = selection(coframe, 3), bs = selection(coframe, 3);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::kron_sandwich(a, bt, bs, dim, E));
  state.SetComplexityN(dim);
}

template <kernels::Exec E>
void BM_KronLift(benchmark::State& state) {
  const Eigen::Index dim = state.range(0);
  const Mat p = random_matrix(8, 8, 3);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::kron_lift(p, dim, E));
}

template <kernels::Exec E>
void BM_BlockSweep(benchmark::State& state) {
  const int max_weight = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const spectral::BlockSet blocks(model::ModelManifold::su2(), max_weight, E);
    benchmark::DoNotOptimize(spectral::kernel_dims(blocks, spectral::Operator::RuminNormalized));
  }
}

}  // namespace

BENCHMARK(BM_KronSandwich<kernels::Exec::Serial>)->RangeMultiplier(2)->Range(16, 64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KronSandwich<kernels::Exec::Parallel>)->RangeMultiplier(2)->Range(16, 64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KronLift<kernels::Exec::Serial>)->RangeMultiplier(2)->Range(16, 64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_KronLift<kernels::Exec::Parallel>)->RangeMultiplier(2)->Range(16, 64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BlockSweep<kernels::Exec::Serial>)->DenseRange(2, 4, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BlockSweep<kernels::Exec::Parallel>)->DenseRange(2, 4, 2)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  kernels::configure_threads();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
