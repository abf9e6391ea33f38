#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prva/distributions.hpp"
#include "prva/op_counter.hpp"
#include "prva/sensor_model.hpp"
#include "prva/stats.hpp"

namespace prva {

struct IntegrationResult {
  double area = 0.0;
  double error = 0.0;  // |1 - area|
  std::chrono::duration<double> elapsed{0.0};
  std::size_t n = 0;
  std::string source_label;
};

/// Sorted-sample trapezoid rule: sort ascending, then sum
/// (x[i] - x[i-1]) * (f(x[i]) + f(x[i-1])) / 2 with f the target density.
/// Takes the samples by value because it sorts them.
IntegrationResult mc_integrate(std::vector<double> samples, const GaussianSpec& target);

/// Same accumulation on samples that are already ascending.
double trapezoid_area(std::span<const double> sorted, const GaussianSpec& target);

enum class SourceKind { uniform, gaussian, prva };

/// Where the integration abscissae come from.
struct SourceSpec {
  SourceKind kind;
  double half_width_sigmas = 0.0;  // uniform only: samples on mean +/- k sigma

  /// "uniform:<k>", "gaussian" or "prva"; throws std::invalid_argument otherwise.
  static SourceSpec parse(const std::string& text);
  std::string label() const;
};

/// Sensor pipeline behind the "prva" source: trace (given or generated once,
/// untimed) -> jittered dequantize + compensation -> retarget through the
/// variate cache.
struct PrvaConfig {
  CalibrationGrid grid = CalibrationGrid::default_grid();
  std::optional<AdcModel> adc;  // default_adc(grid) when empty
  double temperature_c = 20.0;
  double voltage_v = 3.0;
  std::optional<SampleTrace> trace;  // replayed instead of generated
  std::size_t cache_capacity = 4096;
};

struct ConfigurationResult {
  std::string source;
  std::size_t n = 0;
  std::size_t repetitions = 0;
  double mean_error = 0.0;
  Interval error_ci90{0.0, 0.0};
  double mean_time_s = 0.0;
  Interval time_ci90{0.0, 0.0};
  OpCounter ops;  // generation work summed over repetitions
  std::vector<double> errors;
  std::vector<double> times_s;
};

struct BenchmarkReport {
  GaussianSpec target{0.0, 1.0};
  std::size_t n = 0;
  std::size_t repetitions = 0;
  int threads = 1;
  std::uint64_t seed = 0;
  std::vector<ConfigurationResult> configurations;

  const ConfigurationResult& find(const std::string& source) const;
};

struct BenchmarkOptions {
  std::size_t n = 1'000'000;
  std::size_t repetitions = 1000;
  int threads = 1;
  std::uint64_t seed = 1;
  PrvaConfig prva;
};

/// Repetition r of source s draws from
/// SeededStream::derive(seed ^ label_hash(s), r), so every error value is a
/// function of (seed, source, r) alone: independent of the thread count and
/// of which other sources are in the list. Repetitions are spread over
/// OpenMP threads and reduced in repetition order.
BenchmarkReport run_benchmark(std::span<const SourceSpec> sources, const GaussianSpec& target,
                              const BenchmarkOptions& options);

/// FNV-1a of the label; stable across platforms.
std::uint64_t label_hash(const std::string& label);

namespace serial {
BenchmarkReport run_benchmark(std::span<const SourceSpec> sources, const GaussianSpec& target,
                              const BenchmarkOptions& options);
}

}  // namespace prva
