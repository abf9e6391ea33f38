#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "prva/distributions.hpp"
#include "prva/rng.hpp"

namespace prva {

/// Saturating uniform quantizer. Code k covers
/// [range_lo + k*lsb, range_lo + (k+1)*lsb) and reads back as its centre.
class AdcModel {
 public:
  AdcModel(int bin_count, double range_lo, double range_hi);

  /// bin_count codes spanning mean +/- sigmas*sigma of `spec`.
  static AdcModel spanning(const GaussianSpec& spec, double sigmas, int bin_count);

  int bin_count() const { return bin_count_; }
  double range_lo() const { return range_lo_; }
  double range_hi() const { return range_hi_; }
  double lsb() const { return (range_hi_ - range_lo_) / bin_count_; }

  int quantize(double x) const;
  double value(int code) const { return range_lo_ + (code + 0.5) * lsb(); }
  /// Lower edge of `code`; edge(bin_count) == range_hi.
  double edge(int code) const;

  friend bool operator==(const AdcModel&, const AdcModel&) = default;

 private:
  int bin_count_;
  double range_lo_;
  double range_hi_;
};

struct NoiseParams {
  double mean;
  double sigma;
  friend bool operator==(const NoiseParams&, const NoiseParams&) = default;
};

/// Query outside the grid's bounding box. axis() is "temperature" or "voltage".
class GridRangeError : public std::out_of_range {
 public:
  GridRangeError(std::string axis, double value, double lo, double hi);
  const std::string& axis() const { return axis_; }

 private:
  std::string axis_;
};

/// Noise (mean, sigma) of the sensor at each (temperature, supply voltage)
/// node; bilinear in between. Axes are stored ascending whatever order they
/// were supplied in.
class CalibrationGrid {
 public:
  /// `cells` is row-major in the supplied axis order: cells[t * voltages.size() + v].
  CalibrationGrid(std::vector<double> temperatures, std::vector<double> voltages,
                  std::vector<NoiseParams> cells);

  /// Synthetic 7 x 12 grid over 25..-5 C (step 5) and 3.6..1.4 V (step 0.2).
  /// Mean falls with temperature and rises with voltage; sigma falls with
  /// both. (20 C, 3.0 V) sits at mean 980.794, sigma 7.178.
  static CalibrationGrid default_grid();
  static CalibrationGrid constant(std::vector<double> temperatures,
                                  std::vector<double> voltages, NoiseParams value);

  const std::vector<double>& temperatures() const { return temperatures_; }
  const std::vector<double>& voltages() const { return voltages_; }
  /// Indices into the ascending axes.
  const NoiseParams& cell(std::size_t t, std::size_t v) const {
    return cells_[t * voltages_.size() + v];
  }

  NoiseParams noise_params(double temperature, double voltage) const;
  /// Bilinear evaluation using the patch whose lower corner is (t, v); the
  /// point may lie on the patch boundary.
  NoiseParams interpolate_in_patch(std::size_t t, std::size_t v, double temperature,
                                   double voltage) const;

  void check_in_box(double temperature, double voltage) const;

 private:
  std::vector<double> temperatures_;
  std::vector<double> voltages_;
  std::vector<NoiseParams> cells_;
};

/// Operating point used to size the default ADC.
inline constexpr double kReferenceTemperatureC = 10.0;
inline constexpr double kReferenceVoltageV = 2.6;
inline constexpr double kDefaultSampleRateHz = 1154.0;

/// 12-bit ADC spanning mean +/- 4 sigma of the grid at the reference point.
AdcModel default_adc(const CalibrationGrid& grid);

class SampleTrace {
 public:
  SampleTrace(std::vector<std::int32_t> codes, AdcModel adc, double temperature_c,
              double voltage_v, double sample_rate_hz, std::string source_label);

  const std::vector<std::int32_t>& codes() const { return codes_; }
  const AdcModel& adc() const { return adc_; }
  double temperature_c() const { return temperature_c_; }
  double voltage_v() const { return voltage_v_; }
  double sample_rate_hz() const { return sample_rate_hz_; }
  const std::string& source_label() const { return source_label_; }
  std::size_t size() const { return codes_.size(); }

  /// Bin-centre values, no jitter.
  std::vector<double> values() const;

  friend bool operator==(const SampleTrace&, const SampleTrace&) = default;

 private:
  std::vector<std::int32_t> codes_;
  AdcModel adc_;
  double temperature_c_;
  double voltage_v_;
  double sample_rate_hz_;
  std::string source_label_;
};

/// n Gaussian draws at noise_params(grid, T, V), quantized through `adc`.
SampleTrace generate_trace(SeededStream& stream, const CalibrationGrid& grid,
                           double temperature, double voltage, const AdcModel& adc,
                           std::size_t n, double sample_rate_hz = kDefaultSampleRateHz,
                           std::string source_label = "synthetic");

/// Wraps already-drawn values as a trace by passing them through `adc`.
SampleTrace quantize_samples(std::span<const double> values, const AdcModel& adc,
                             double temperature_c, double voltage_v,
                             std::string source_label = "quantized");

/// value(code) + u * lsb / 2 with u ~ Uniform[-1, 1] for each code, so each
/// output stays inside its own bin.
template <UniformSource S>
std::vector<double> dequantize_with_jitter(const SampleTrace& trace, S& stream) {
  const AdcModel& adc = trace.adc();
  const double half = 0.5 * adc.lsb();
  OpCounter& ops = stream.counter();
  std::vector<double> out;
  out.reserve(trace.size());
  for (std::int32_t code : trace.codes()) {
    const double u = 2.0 * stream.uniform01() - 1.0;
    out.push_back(adc.value(code) + u * half);
  }
  ops.multiplications += 2 * trace.size();
  ops.additions += 2 * trace.size();
  return out;
}

}  // namespace prva
