// Serial reference kernels against their OpenMP counterparts at the shapes a
// training step actually hits: a batch of 128 rows through 500-wide layers.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "trigan/kernels.hpp"

namespace k = tgan::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

using Gemm = void (*)(std::span<const double>, std::span<const double>, std::span<double>,
                      std::size_t, std::size_t, std::size_t);

// Args: m, k, n. Operand sizes are the same for every transpose variant.
template <Gemm F>
void BM_gemm(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto kk = static_cast<std::size_t>(state.range(1));
  const auto n = static_cast<std::size_t>(state.range(2));
  const auto a = random_vec(m * kk, 1);
  const auto b = random_vec(kk * n, 2);
  std::vector<double> c(m * n, 0.0);
  for (auto _ : state) {
    F(a, b, c, m, kk, n);
    benchmark::DoNotOptimize(c.data());
    benchmark::ClobberMemory();
  }
  state.counters["GFLOPS"] = benchmark::Counter(
      2.0 * static_cast<double>(m * kk * n), benchmark::Counter::kIsIterationInvariantRate,
      benchmark::Counter::kIs1000);
}

void gemm_shapes(benchmark::internal::Benchmark* b) {
  b->Args({128, 500, 500})   // hidden layer forward
      ->Args({128, 4, 500})  // first layer
      ->Args({500, 128, 500})  // weight gradient (tn)
      ->Args({128, 500, 1})    // output head
      ->Unit(benchmark::kMicrosecond);
}

template <k::RbfSums (*F)(std::span<const double>, std::span<const double>, std::size_t, double)>
void BM_rbf(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_vec(2 * n, 3);
  const auto b = random_vec(2 * n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(F(a, b, 2, 0.7));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(4 * n * n));
}

}  // namespace

BENCHMARK(BM_gemm<k::serial::gemm_nn>)->Name("gemm_nn/serial")->Apply(gemm_shapes);
BENCHMARK(BM_gemm<k::parallel::gemm_nn>)->Name("gemm_nn/parallel")->Apply(gemm_shapes);
BENCHMARK(BM_gemm<k::serial::gemm_nt>)->Name("gemm_nt/serial")->Apply(gemm_shapes);
BENCHMARK(BM_gemm<k::parallel::gemm_nt>)->Name("gemm_nt/parallel")->Apply(gemm_shapes);
BENCHMARK(BM_gemm<k::serial::gemm_tn>)->Name("gemm_tn/serial")->Apply(gemm_shapes);
BENCHMARK(BM_gemm<k::parallel::gemm_tn>)->Name("gemm_tn/parallel")->Apply(gemm_shapes);
BENCHMARK(BM_rbf<k::serial::rbf_sums>)->Name("rbf_sums/serial")->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rbf<k::parallel::rbf_sums>)->Name("rbf_sums/parallel")->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
