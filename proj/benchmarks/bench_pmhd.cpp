#include "pmhd/pmhd.hpp"

#include <benchmark/benchmark.h>

using namespace pmhd;

namespace {

Series series(std::size_t n, Family f = Family::gaussian)
{
  ProcessSpec spec;
  spec.period = 2;
  spec.d = {0.2, 0.15};
  spec.n = n;
  spec.seed = 1;
  spec.noise = {f, {1.0}};
  return simulate(spec);
}

void BM_PiCoeffs(benchmark::State& state)
{
  const auto order = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(pi_coeffs(0.3, order));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PiCoeffs)->RangeMultiplier(10)->Range(100, 1000000)->Complexity();

void BM_Simulate(benchmark::State& state)
{
  for (auto _ : state)
    benchmark::DoNotOptimize(series(static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_Simulate)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Invert(benchmark::State& state)
{
  const Series s = series(static_cast<std::size_t>(state.range(0)));
  const auto method = state.range(1) ? InversionMethod::fft : InversionMethod::direct;
  const std::vector<double> d{0.25, 0.1};
  for (auto _ : state)
    benchmark::DoNotOptimize(invert(s, d, method));
}
BENCHMARK(BM_Invert)
  ->ArgsProduct({{100, 1000, 4096, 16384}, {0, 1}})
  ->ArgNames({"n", "fft"})
  ->Unit(benchmark::kMicrosecond);

void BM_KdeTensor(benchmark::State& state)
{
  const auto n_blocks = static_cast<std::size_t>(state.range(0));
  const BlockMatrix samples = block(draw_noise(NoiseSpec::gaussian(), 2 * n_blocks, 3), 2);
  const KdeModel kde(samples, {Family::gaussian, 2}, 0.4);
  const QuadGrid grid({{-5.0, 5.0, 101}, {-5.0, 5.0, 101}});
  const auto axes = grid.all_nodes();
  for (auto _ : state)
    benchmark::DoNotOptimize(kde.evaluate_tensor(axes));
}
BENCHMARK(BM_KdeTensor)->Arg(50)->Arg(500)->Arg(5000)->Unit(benchmark::kMicrosecond);

void BM_Objective(benchmark::State& state)
{
  const auto family = state.range(1) ? Family::cauchy : Family::gaussian;
  const Series s = series(static_cast<std::size_t>(state.range(0)), family);
  EstimatorConfig cfg;
  cfg.kernel = family;
  cfg.reference = family;
  const Objective obj(s, cfg);
  const std::vector<double> d{0.2, 0.15};
  for (auto _ : state)
    benchmark::DoNotOptimize(obj(d));
}
BENCHMARK(BM_Objective)->ArgsProduct({{100, 1000}, {0, 1}})->ArgNames({"n", "cauchy"})->Unit(benchmark::kMicrosecond);

void BM_Estimate(benchmark::State& state)
{
  const Series s = series(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate(s, EstimatorConfig{}));
}
BENCHMARK(BM_Estimate)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
