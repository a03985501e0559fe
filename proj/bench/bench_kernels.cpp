// Serial reference vs OpenMP kernels.

#include "dce/spectral.hpp"
#include "dce/sweep.hpp"

#include <benchmark/benchmark.h>

namespace {

dce::SweepSpec sweep_spec(int points)
{
  dce::SweepSpec spec = dce::figure_preset("fig6_equal_xm02").spec;
  spec.points = points;
  return spec;
}

dce::ModelParams band_model()
{
  dce::ModelInputs in;
  in.gamma_m = in.gamma_d = 1e-4;
  in.g_m = 0.05;
  in.g_d = 0.25;
  in.lambda_m = 2e-5;
  in.lambda_d = 3e-5;
  return dce::ModelParams(in);
}

void BM_SweepSerial(benchmark::State& state)
{
  const dce::SweepSpec spec = sweep_spec(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dce::run_sweep_serial(spec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepParallel(benchmark::State& state)
{
  const dce::SweepSpec spec = sweep_spec(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dce::run_sweep(spec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BandSerial(benchmark::State& state)
{
  const dce::ModelParams p = band_model();
  const dce::Band band{-2.0, 2.0, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(dce::evaluate_band_serial(p, band));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BandParallel(benchmark::State& state)
{
  const dce::ModelParams p = band_model();
  const dce::Band band{-2.0, 2.0, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(dce::evaluate_band(p, band));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BandSerial)->Arg(4001)->Arg(100001)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BandParallel)->Arg(4001)->Arg(100001)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
