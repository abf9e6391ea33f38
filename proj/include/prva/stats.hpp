#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "prva/distributions.hpp"
#include "prva/sensor_model.hpp"

namespace prva {

/// Equal-width binning. edges.size() == counts.size() + 1.
struct Histogram {
  std::vector<double> edges;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  std::size_t bins() const { return counts.size(); }
  double lo() const { return edges.front(); }
  double hi() const { return edges.back(); }
  double center(std::size_t k) const { return 0.5 * (edges[k] + edges[k + 1]); }
};

struct FitResult {
  double mean = 0.0;
  double sigma = 0.0;
  std::uint64_t n = 0;

  GaussianSpec spec() const { return GaussianSpec(mean, sigma); }
};

/// Thrown by fit_gaussian when the data has no spread.
class DegenerateFitError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Samples outside [lo, hi] land in the nearest edge bin.
Histogram histogram(std::span<const double> samples, std::size_t bins, double lo, double hi);

/// One bin per ADC code over the span of codes actually present
/// ([min code, max code]), with the ADC's own edges.
Histogram code_histogram(const SampleTrace& trace);

/// Maximum-likelihood fit: sample mean and divide-by-n standard deviation.
FitResult fit_gaussian(std::span<const double> samples);
/// Same fit treating every count as sitting at its bin centre.
FitResult fit_gaussian(const Histogram& h);

/// Probability mass of `spec` on [a, b], evaluated from whichever tail keeps
/// precision.
double gaussian_mass(double a, double b, const GaussianSpec& spec);

/// D(P || Q) in nats. P is the empirical bin mass, Q the fitted Gaussian's
/// exact mass per bin renormalised over [h.lo(), h.hi()]. Bins with P = 0
/// contribute nothing.
double kl_divergence(const Histogram& h, const FitResult& fitted);

/// KL of a trace against a Gaussian fitted to its own code values, using
/// one bin per ADC code.
double native_kl(const SampleTrace& trace);

/// Bin the samples over their own [min, max] range, fit a Gaussian to the
/// binned values, and return the KL between the two.
double binned_fit_kl(std::span<const double> samples, std::size_t bins);

struct SweepPoint {
  std::size_t bins;
  double mean_kl;
};

/// For every repetition r, draws n samples of `spec` from
/// SeededStream::derive(seed, r) and evaluates binned_fit_kl at each bin
/// count; returns the per-bin-count mean. Repetitions run on `threads`
/// OpenMP threads; the reduction is always done in repetition order, so the
/// result does not depend on the thread count.
std::vector<SweepPoint> quantization_sweep(const GaussianSpec& spec, std::size_t n,
                                           std::span<const std::size_t> bin_counts,
                                           std::size_t repetitions, std::uint64_t seed,
                                           int threads = 1);

enum class SyntheticShape {
  gaussian,          // draws from the spec itself
  uniform_3sigma,    // uniform on mean +/- 3 sigma
};

/// Repetition r draws n samples of `shape` from SeededStream::derive(seed, r),
/// quantizes them through `adc`, and records native_kl. Returns the per
/// repetition values in repetition order.
std::vector<double> native_kl_experiment(SyntheticShape shape, const GaussianSpec& spec,
                                         const AdcModel& adc, std::size_t n,
                                         std::size_t repetitions, std::uint64_t seed,
                                         int threads = 1);

struct Interval {
  double lo;
  double hi;
  double center() const { return 0.5 * (lo + hi); }
};

/// mean +/- 1.645 s / sqrt(n), s with the n - 1 denominator.
Interval confidence_interval_90(std::span<const double> values);

namespace serial {

/// Single-threaded reference for prva::quantization_sweep.
std::vector<SweepPoint> quantization_sweep(const GaussianSpec& spec, std::size_t n,
                                           std::span<const std::size_t> bin_counts,
                                           std::size_t repetitions, std::uint64_t seed);

std::vector<double> native_kl_experiment(SyntheticShape shape, const GaussianSpec& spec,
                                         const AdcModel& adc, std::size_t n,
                                         std::size_t repetitions, std::uint64_t seed);

}  // namespace serial

}  // namespace prva
