#include "prva/stats.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "prva/samplers.hpp"

namespace prva {

Histogram histogram(std::span<const double> samples, std::size_t bins, double lo, double hi) {
  if (bins < 2) throw std::invalid_argument("histogram: bins must be >= 2");
  if (!(lo < hi)) throw std::invalid_argument("histogram: requires lo < hi");
  if (samples.empty()) throw std::invalid_argument("histogram: empty input");

  Histogram h;
  h.edges.resize(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t k = 0; k < bins; ++k) h.edges[k] = lo + static_cast<double>(k) * width;
  h.edges[bins] = hi;
  h.counts.assign(bins, 0);
  const auto last = static_cast<double>(bins - 1);
  for (double x : samples) {
    const double pos = std::floor((x - lo) / width);
    const double k = std::clamp(pos, 0.0, last);
    ++h.counts[static_cast<std::size_t>(k)];
  }
  h.total = samples.size();
  return h;
}

Histogram code_histogram(const SampleTrace& trace) {
  if (trace.size() == 0) throw std::invalid_argument("code_histogram: empty trace");
  const auto [lo_it, hi_it] = std::minmax_element(trace.codes().begin(), trace.codes().end());
  int lo_code = *lo_it;
  int hi_code = *hi_it + 1;
  // A single occupied code still gets two bins so the histogram is valid.
  if (hi_code - lo_code < 2) {
    if (hi_code < trace.adc().bin_count())
      ++hi_code;
    else
      --lo_code;
  }

  Histogram h;
  for (int c = lo_code; c <= hi_code; ++c) h.edges.push_back(trace.adc().edge(c));
  h.counts.assign(static_cast<std::size_t>(hi_code - lo_code), 0);
  for (std::int32_t c : trace.codes()) ++h.counts[static_cast<std::size_t>(c - lo_code)];
  h.total = trace.size();
  return h;
}

FitResult fit_gaussian(std::span<const double> samples) {
  if (samples.size() < 2) throw std::invalid_argument("fit_gaussian: need at least 2 samples");
  double sum = 0.0;
  for (double x : samples) sum += x;
  const double n = static_cast<double>(samples.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double sigma = std::sqrt(ss / n);
  if (!(sigma > 0.0)) throw DegenerateFitError("fit_gaussian: data has zero spread");
  return {mean, sigma, samples.size()};
}

FitResult fit_gaussian(const Histogram& h) {
  if (h.total < 2) throw std::invalid_argument("fit_gaussian: need at least 2 samples");
  double sum = 0.0;
  for (std::size_t k = 0; k < h.bins(); ++k) sum += static_cast<double>(h.counts[k]) * h.center(k);
  const double n = static_cast<double>(h.total);
  const double mean = sum / n;
  double ss = 0.0;
  for (std::size_t k = 0; k < h.bins(); ++k) {
    const double d = h.center(k) - mean;
    ss += static_cast<double>(h.counts[k]) * d * d;
  }
  const double sigma = std::sqrt(ss / n);
  if (!(sigma > 0.0)) throw DegenerateFitError("fit_gaussian: data has zero spread");
  return {mean, sigma, h.total};
}

double gaussian_mass(double a, double b, const GaussianSpec& spec) {
  // Upper half: mirror through the mean so both terms are small tail masses.
  if (a >= spec.mean())
    return gaussian_cdf(2.0 * spec.mean() - a, spec) - gaussian_cdf(2.0 * spec.mean() - b, spec);
  return gaussian_cdf(b, spec) - gaussian_cdf(a, spec);
}

double kl_divergence(const Histogram& h, const FitResult& fitted) {
  if (h.total == 0) throw std::invalid_argument("kl_divergence: empty histogram");
  if (h.edges.size() != h.counts.size() + 1)
    throw std::invalid_argument("kl_divergence: histogram edges and counts disagree");
  const GaussianSpec q_spec = fitted.spec();
  const double q_total = gaussian_mass(h.lo(), h.hi(), q_spec);
  if (!(q_total > 0.0))
    throw std::domain_error("kl_divergence: fitted Gaussian has no mass on the histogram range");

  const double n = static_cast<double>(h.total);
  double kl = 0.0;
  for (std::size_t k = 0; k < h.bins(); ++k) {
    if (h.counts[k] == 0) continue;
    const double p = static_cast<double>(h.counts[k]) / n;
    const double q = gaussian_mass(h.edges[k], h.edges[k + 1], q_spec) / q_total;
    if (!(q > 0.0))
      throw std::domain_error("kl_divergence: Q = 0 where P > 0 in bin " + std::to_string(k));
    kl -= p * std::log(q / p);
  }
  return std::max(kl, 0.0);
}

double native_kl(const SampleTrace& trace) {
  const Histogram h = code_histogram(trace);
  return kl_divergence(h, fit_gaussian(trace.values()));
}

double binned_fit_kl(std::span<const double> samples, std::size_t bins) {
  if (samples.empty()) throw std::invalid_argument("binned_fit_kl: empty input");
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  if (!(*lo < *hi)) throw DegenerateFitError("binned_fit_kl: data has zero spread");
  const Histogram h = histogram(samples, bins, *lo, *hi);
  return kl_divergence(h, fit_gaussian(h));
}

Interval confidence_interval_90(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("confidence_interval_90: need n >= 2");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double half = 1.645 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return {mean - half, mean + half};
}

namespace {

void check_sweep_args(std::size_t n, std::span<const std::size_t> bin_counts,
                      std::size_t repetitions) {
  if (n < 1000) throw std::invalid_argument("quantization_sweep: n must be >= 1000");
  if (repetitions < 1) throw std::invalid_argument("quantization_sweep: repetitions must be >= 1");
  if (bin_counts.empty()) throw std::invalid_argument("quantization_sweep: no bin counts");
}

// KL for each bin count on the samples of repetition `rep`.
void sweep_repetition(const GaussianSpec& spec, std::size_t n,
                      std::span<const std::size_t> bin_counts, std::uint64_t seed,
                      std::size_t rep, std::vector<double>& samples, double* out) {
  SeededStream stream = SeededStream::derive(seed, rep);
  samples.resize(n);
  for (double& x : samples) x = reference_gaussian_sample(stream, spec);
  for (std::size_t b = 0; b < bin_counts.size(); ++b) out[b] = binned_fit_kl(samples, bin_counts[b]);
}

std::vector<SweepPoint> reduce_sweep(std::span<const std::size_t> bin_counts,
                                     std::size_t repetitions, const std::vector<double>& kl) {
  std::vector<SweepPoint> points;
  for (std::size_t b = 0; b < bin_counts.size(); ++b) {
    double sum = 0.0;
    for (std::size_t r = 0; r < repetitions; ++r) sum += kl[r * bin_counts.size() + b];
    points.push_back({bin_counts[b], sum / static_cast<double>(repetitions)});
  }
  return points;
}

double native_kl_repetition(SyntheticShape shape, const GaussianSpec& spec, const AdcModel& adc,
                            std::size_t n, std::uint64_t seed, std::size_t rep) {
  SeededStream stream = SeededStream::derive(seed, rep);
  std::vector<double> xs(n);
  if (shape == SyntheticShape::gaussian) {
    for (double& x : xs) x = reference_gaussian_sample(stream, spec);
  } else {
    const UniformSpec range(spec.mean() - 3.0 * spec.sigma(), spec.mean() + 3.0 * spec.sigma());
    for (double& x : xs) x = inversion_sample(stream, range);
  }
  return native_kl(quantize_samples(xs, adc, 0.0, 0.0, "synthetic"));
}

void check_experiment_args(std::size_t n, std::size_t repetitions) {
  if (n < 2) throw std::invalid_argument("native_kl_experiment: n must be >= 2");
  if (repetitions < 1) throw std::invalid_argument("native_kl_experiment: repetitions must be >= 1");
}

}  // namespace

std::vector<double> native_kl_experiment(SyntheticShape shape, const GaussianSpec& spec,
                                         const AdcModel& adc, std::size_t n,
                                         std::size_t repetitions, std::uint64_t seed,
                                         int threads) {
  check_experiment_args(n, repetitions);
  if (threads < 1) throw std::invalid_argument("native_kl_experiment: threads must be >= 1");
  std::vector<double> kl(repetitions);
  const auto reps = static_cast<std::int64_t>(repetitions);
#pragma omp parallel for num_threads(threads) schedule(dynamic)
  for (std::int64_t r = 0; r < reps; ++r)
    kl[static_cast<std::size_t>(r)] =
        native_kl_repetition(shape, spec, adc, n, seed, static_cast<std::size_t>(r));
  return kl;
}

std::vector<SweepPoint> quantization_sweep(const GaussianSpec& spec, std::size_t n,
                                           std::span<const std::size_t> bin_counts,
                                           std::size_t repetitions, std::uint64_t seed,
                                           int threads) {
  check_sweep_args(n, bin_counts, repetitions);
  if (threads < 1) throw std::invalid_argument("quantization_sweep: threads must be >= 1");
  const std::size_t nb = bin_counts.size();
  std::vector<double> kl(repetitions * nb);
  const auto reps = static_cast<std::int64_t>(repetitions);

#pragma omp parallel num_threads(threads)
  {
    std::vector<double> samples;
#pragma omp for schedule(dynamic)
    for (std::int64_t r = 0; r < reps; ++r)
      sweep_repetition(spec, n, bin_counts, seed, static_cast<std::size_t>(r), samples,
                       kl.data() + r * static_cast<std::int64_t>(nb));
  }
  return reduce_sweep(bin_counts, repetitions, kl);
}

namespace serial {

std::vector<SweepPoint> quantization_sweep(const GaussianSpec& spec, std::size_t n,
                                           std::span<const std::size_t> bin_counts,
                                           std::size_t repetitions, std::uint64_t seed) {
  check_sweep_args(n, bin_counts, repetitions);
  const std::size_t nb = bin_counts.size();
  std::vector<double> kl(repetitions * nb);
  std::vector<double> samples;
  for (std::size_t r = 0; r < repetitions; ++r)
    sweep_repetition(spec, n, bin_counts, seed, r, samples, kl.data() + r * nb);
  return reduce_sweep(bin_counts, repetitions, kl);
}

std::vector<double> native_kl_experiment(SyntheticShape shape, const GaussianSpec& spec,
                                         const AdcModel& adc, std::size_t n,
                                         std::size_t repetitions, std::uint64_t seed) {
  check_experiment_args(n, repetitions);
  std::vector<double> kl;
  for (std::size_t r = 0; r < repetitions; ++r)
    kl.push_back(native_kl_repetition(shape, spec, adc, n, seed, r));
  return kl;
}

}  // namespace serial

}  // namespace prva
