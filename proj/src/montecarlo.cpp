#include "prva/montecarlo.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "prva/rng.hpp"
#include "prva/samplers.hpp"
#include "prva/transform.hpp"
#include "prva/variate_cache.hpp"

namespace prva {

double trapezoid_area(std::span<const double> sorted, const GaussianSpec& target) {
  if (sorted.size() < 2) throw std::invalid_argument("trapezoid_area: need at least 2 samples");
  double area = 0.0;
  double f_prev = gaussian_pdf(sorted[0], target);
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double f = gaussian_pdf(sorted[i], target);
    area += (sorted[i] - sorted[i - 1]) * (f + f_prev) / 2.0;
    f_prev = f;
  }
  return area;
}

IntegrationResult mc_integrate(std::vector<double> samples, const GaussianSpec& target) {
  if (samples.size() < 2) throw std::invalid_argument("mc_integrate: need at least 2 samples");
  const auto start = std::chrono::steady_clock::now();
  std::sort(samples.begin(), samples.end());
  IntegrationResult r;
  r.area = trapezoid_area(samples, target);
  r.error = std::abs(1.0 - r.area);
  r.elapsed = std::chrono::steady_clock::now() - start;
  r.n = samples.size();
  return r;
}

SourceSpec SourceSpec::parse(const std::string& text) {
  if (text == "gaussian") return {SourceKind::gaussian};
  if (text == "prva") return {SourceKind::prva};
  const std::string prefix = "uniform:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string k = text.substr(prefix.size());
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(k, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != k.size() || !(value > 0.0) || !std::isfinite(value))
      throw std::invalid_argument("bad uniform half-width in source '" + text + "'");
    return {SourceKind::uniform, value};
  }
  throw std::invalid_argument("unknown source '" + text + "' (expected uniform:<k>, gaussian, prva)");
}

std::string SourceSpec::label() const {
  switch (kind) {
    case SourceKind::gaussian:
      return "gaussian";
    case SourceKind::prva:
      return "prva";
    case SourceKind::uniform: {
      std::string k = std::to_string(half_width_sigmas);
      k.erase(k.find_last_not_of('0') + 1);
      if (k.back() == '.') k.pop_back();
      return "uniform:" + k;
    }
  }
  return "?";
}

std::uint64_t label_hash(const std::string& label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

const ConfigurationResult& BenchmarkReport::find(const std::string& source) const {
  for (const auto& c : configurations)
    if (c.source == source) return c;
  throw std::out_of_range("BenchmarkReport: no configuration '" + source + "'");
}

namespace {

// State shared by every repetition of the prva source; built once, untimed.
struct PrvaSetup {
  SampleTrace trace;
  TransformCoeffs compensation;
  TransformCoeffs retarget;
};

PrvaSetup prepare_prva(const PrvaConfig& cfg, const GaussianSpec& target, std::size_t n,
                       std::uint64_t seed) {
  const AdcModel adc = cfg.adc ? *cfg.adc : default_adc(cfg.grid);
  SampleTrace trace = [&] {
    if (cfg.trace) return *cfg.trace;
    SeededStream stream = SeededStream::derive(seed ^ label_hash("prva-trace"), 0);
    return generate_trace(stream, cfg.grid, cfg.temperature_c, cfg.voltage_v, adc, n);
  }();
  if (trace.size() < n)
    throw std::invalid_argument("prva source: replayed trace has " + std::to_string(trace.size()) +
                                " codes, benchmark needs " + std::to_string(n));
  TransformCoeffs comp = compensation_coeffs(trace, cfg.grid);
  TransformCoeffs retarget = make_coeffs(GaussianSpec(0.0, 1.0), target);
  return {std::move(trace), comp, retarget};
}

struct RepetitionOutcome {
  double error;
  double seconds;
  OpCounter ops;
};

RepetitionOutcome run_repetition(const SourceSpec& source, const GaussianSpec& target,
                                 std::size_t n, std::uint64_t seed, std::size_t rep,
                                 const PrvaSetup* prva, std::size_t cache_capacity) {
  SeededStream stream = SeededStream::derive(seed ^ label_hash(source.label()), rep);
  const auto start = std::chrono::steady_clock::now();

  std::vector<double> samples;
  switch (source.kind) {
    case SourceKind::uniform: {
      const UniformSpec range(target.mean() - source.half_width_sigmas * target.sigma(),
                              target.mean() + source.half_width_sigmas * target.sigma());
      samples.resize(n);
      for (double& x : samples) x = inversion_sample(stream, range);
      break;
    }
    case SourceKind::gaussian:
      samples.resize(n);
      for (double& x : samples) x = reference_gaussian_sample(stream, target);
      break;
    case SourceKind::prva: {
      // Replay the materialised trace; jitter differs per repetition.
      std::vector<double> standard = dequantize_with_jitter(prva->trace, stream);
      for (double& x : standard) x = apply(prva->compensation, x, stream.counter());
      samples = run_cached_transform(standard, prva->retarget, cache_capacity, stream.counter());
      if (samples.size() > n) samples.resize(n);
      break;
    }
  }

  IntegrationResult r = mc_integrate(std::move(samples), target);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  return {r.error, elapsed.count(), stream.counter()};
}

void check_args(std::span<const SourceSpec> sources, const BenchmarkOptions& o) {
  if (sources.empty()) throw std::invalid_argument("run_benchmark: no sources");
  if (o.n < 2) throw std::invalid_argument("run_benchmark: n must be >= 2");
  if (o.repetitions < 1) throw std::invalid_argument("run_benchmark: repetitions must be >= 1");
  if (o.threads < 1) throw std::invalid_argument("run_benchmark: threads must be >= 1");
}

ConfigurationResult summarise(const SourceSpec& source, const BenchmarkOptions& o,
                              const std::vector<RepetitionOutcome>& outcomes) {
  ConfigurationResult c;
  c.source = source.label();
  c.n = o.n;
  c.repetitions = o.repetitions;
  double err_sum = 0.0, time_sum = 0.0;
  for (const RepetitionOutcome& r : outcomes) {
    c.errors.push_back(r.error);
    c.times_s.push_back(r.seconds);
    err_sum += r.error;
    time_sum += r.seconds;
    c.ops += r.ops;
  }
  const double reps = static_cast<double>(outcomes.size());
  c.mean_error = err_sum / reps;
  c.mean_time_s = time_sum / reps;
  if (outcomes.size() >= 2) {
    c.error_ci90 = confidence_interval_90(c.errors);
    c.time_ci90 = confidence_interval_90(c.times_s);
  } else {
    c.error_ci90 = {c.mean_error, c.mean_error};
    c.time_ci90 = {c.mean_time_s, c.mean_time_s};
  }
  return c;
}

BenchmarkReport make_report(const GaussianSpec& target, const BenchmarkOptions& o) {
  BenchmarkReport report;
  report.target = target;
  report.n = o.n;
  report.repetitions = o.repetitions;
  report.threads = o.threads;
  report.seed = o.seed;
  return report;
}

}  // namespace

BenchmarkReport run_benchmark(std::span<const SourceSpec> sources, const GaussianSpec& target,
                              const BenchmarkOptions& o) {
  check_args(sources, o);
  BenchmarkReport report = make_report(target, o);
  for (const SourceSpec& source : sources) {
    std::optional<PrvaSetup> prva;
    if (source.kind == SourceKind::prva) prva = prepare_prva(o.prva, target, o.n, o.seed);

    std::vector<RepetitionOutcome> outcomes(o.repetitions);
    const auto reps = static_cast<std::int64_t>(o.repetitions);
#pragma omp parallel for num_threads(o.threads) schedule(dynamic)
    for (std::int64_t r = 0; r < reps; ++r)
      outcomes[static_cast<std::size_t>(r)] =
          run_repetition(source, target, o.n, o.seed, static_cast<std::size_t>(r),
                         prva ? &*prva : nullptr, o.prva.cache_capacity);
    report.configurations.push_back(summarise(source, o, outcomes));
  }
  return report;
}

namespace serial {

BenchmarkReport run_benchmark(std::span<const SourceSpec> sources, const GaussianSpec& target,
                              const BenchmarkOptions& o) {
  check_args(sources, o);
  BenchmarkReport report = make_report(target, o);
  report.threads = 1;
  for (const SourceSpec& source : sources) {
    std::optional<PrvaSetup> prva;
    if (source.kind == SourceKind::prva) prva = prepare_prva(o.prva, target, o.n, o.seed);
    std::vector<RepetitionOutcome> outcomes;
    for (std::size_t r = 0; r < o.repetitions; ++r)
      outcomes.push_back(run_repetition(source, target, o.n, o.seed, r, prva ? &*prva : nullptr,
                                        o.prva.cache_capacity));
    report.configurations.push_back(summarise(source, o, outcomes));
  }
  return report;
}

}  // namespace serial

}  // namespace prva
