// Serial reference kernels against their OpenMP counterparts, plus per-variate
// cost of the Gaussian generators the benchmark compares.
//
//   prva_bench --benchmark_filter=Sweep

#include <benchmark/benchmark.h>
#include <omp.h>

#include <vector>

#include "prva/montecarlo.hpp"
#include "prva/samplers.hpp"
#include "prva/sensor_model.hpp"
#include "prva/stats.hpp"
#include "prva/transform.hpp"
#include "prva/variate_cache.hpp"

namespace {

using namespace prva;

const GaussianSpec kTarget(980.794, 7.178);
const std::vector<std::size_t> kBins = {16, 64, 256, 1024, 4096};

void BM_SweepSerial(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(serial::quantization_sweep(kTarget, 100000, kBins, 16, 1));
}
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);

void BM_SweepParallel(benchmark::State& state) {
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(quantization_sweep(kTarget, 100000, kBins, 16, 1, threads));
}
BENCHMARK(BM_SweepParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_DriftSerial(benchmark::State& state) {
  const CalibrationGrid grid = CalibrationGrid::default_grid();
  const AdcModel adc = default_adc(grid);
  for (auto _ : state) benchmark::DoNotOptimize(serial::survey_drift(grid, adc, 20000, 1));
}
BENCHMARK(BM_DriftSerial)->Unit(benchmark::kMillisecond);

void BM_DriftParallel(benchmark::State& state) {
  const CalibrationGrid grid = CalibrationGrid::default_grid();
  const AdcModel adc = default_adc(grid);
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(survey_drift(grid, adc, 20000, 1, threads));
}
BENCHMARK(BM_DriftParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);

std::vector<SourceSpec> bench_sources() {
  std::vector<SourceSpec> s;
  for (const char* label : {"uniform:3", "gaussian", "prva"}) s.push_back(SourceSpec::parse(label));
  return s;
}

void BM_MonteCarloSerial(benchmark::State& state) {
  const auto sources = bench_sources();
  BenchmarkOptions o;
  o.n = 100000;
  o.repetitions = 8;
  for (auto _ : state) benchmark::DoNotOptimize(serial::run_benchmark(sources, kTarget, o));
}
BENCHMARK(BM_MonteCarloSerial)->Unit(benchmark::kMillisecond);

void BM_MonteCarloParallel(benchmark::State& state) {
  const auto sources = bench_sources();
  BenchmarkOptions o;
  o.n = 100000;
  o.repetitions = 8;
  o.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_benchmark(sources, kTarget, o));
}
BENCHMARK(BM_MonteCarloParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);

// Per-variate generator cost.

void BM_ReferenceGaussian(benchmark::State& state) {
  SeededStream s(1);
  for (auto _ : state) benchmark::DoNotOptimize(reference_gaussian_sample(s, kTarget));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ReferenceGaussian);

void BM_AcceptReject(benchmark::State& state) {
  const UniformSpec proposal(kTarget.mean() - 4 * kTarget.sigma(),
                             kTarget.mean() + 4 * kTarget.sigma());
  const AcceptRejectSampler ar(kTarget, proposal, tight_envelope_constant(kTarget, proposal));
  SeededStream s(1);
  for (auto _ : state) benchmark::DoNotOptimize(ar.sample(s));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_AcceptReject);

void BM_TransformOnly(benchmark::State& state) {
  SeededStream s(1);
  std::vector<double> src(1 << 16);
  for (double& x : src) x = reference_gaussian_sample(s, GaussianSpec(0.0, 1.0));
  const TransformCoeffs c = make_coeffs({0.0, 1.0}, kTarget);
  OpCounter ops;
  for (auto _ : state) {
    double acc = 0.0;
    for (double x : src) acc += apply(c, x, ops);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(src.size()));
}
BENCHMARK(BM_TransformOnly);

void BM_PrvaPipeline(benchmark::State& state) {
  const CalibrationGrid grid = CalibrationGrid::default_grid();
  SeededStream gen(1);
  const SampleTrace trace = generate_trace(gen, grid, 20.0, 3.0, default_adc(grid), 1 << 16);
  const TransformCoeffs c = make_coeffs({0.0, 1.0}, kTarget);
  const bool threaded = state.range(0) != 0;
  SeededStream s(2);
  for (auto _ : state) {
    const std::vector<double> standard = compensate(trace, grid, s);
    OpCounter ops;
    benchmark::DoNotOptimize(run_cached_transform(standard, c, 4096, ops, threaded));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trace.size()));
}
BENCHMARK(BM_PrvaPipeline)->Arg(0)->Arg(1)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
