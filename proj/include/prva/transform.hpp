#pragma once

#include <span>
#include <vector>

#include "prva/distributions.hpp"
#include "prva/op_counter.hpp"
#include "prva/rng.hpp"
#include "prva/sensor_model.hpp"

namespace prva {

/// y = scale * x + offset, mapping N(src) onto N(dst).
class TransformCoeffs {
 public:
  const GaussianSpec& source() const { return src_; }
  const GaussianSpec& target() const { return dst_; }
  double scale() const { return scale_; }
  double offset() const { return offset_; }

  friend TransformCoeffs make_coeffs(const GaussianSpec& src, const GaussianSpec& dst);

 private:
  TransformCoeffs(GaussianSpec src, GaussianSpec dst);

  GaussianSpec src_;
  GaussianSpec dst_;
  double scale_;
  double offset_;
};

TransformCoeffs make_coeffs(const GaussianSpec& src, const GaussianSpec& dst);

inline double apply(const TransformCoeffs& c, double x) { return c.scale() * x + c.offset(); }

/// Charges exactly one multiplication and one addition.
inline double apply(const TransformCoeffs& c, double x, OpCounter& ops) {
  ops.multiplications += 1;
  ops.additions += 1;
  return apply(c, x);
}

enum class CompensationSource {
  /// (mean, sigma) from the grid at the trace's recorded temperature/voltage.
  grid,
  /// (mean, sigma) fitted from the dequantized trace itself; no grid needed.
  self_calibrate,
};

/// Coefficients taking the trace's noise distribution to N(0, 1).
TransformCoeffs compensation_coeffs(const SampleTrace& trace, const CalibrationGrid& grid);

/// Dequantize with jitter, then standardise. The output is close to N(0, 1)
/// for any operating point inside the grid. Coefficients are fixed for the
/// whole trace.
std::vector<double> compensate(const SampleTrace& trace, const CalibrationGrid& grid,
                               SeededStream& stream,
                               CompensationSource source = CompensationSource::grid);

/// Per-cell moments before and after compensation.
struct DriftCell {
  double temperature;
  double voltage;
  double raw_mean;
  double raw_sigma;
  double compensated_mean;
  double compensated_sigma;
};

struct DriftSurvey {
  std::vector<DriftCell> cells;  // temperature-major over the ascending axes

  double grand_raw_mean() const;
  double max_raw_mean_deviation() const;  // max |raw_mean - grand mean|
  double max_abs_compensated_mean() const;
};

/// Generates `n_per_cell` samples at every grid node (cell i uses
/// SeededStream::derive(seed, i)), compensates them, and records both sets of
/// fitted moments. Cells are spread over `threads` OpenMP threads.
DriftSurvey survey_drift(const CalibrationGrid& grid, const AdcModel& adc,
                         std::size_t n_per_cell, std::uint64_t seed, int threads = 1);

namespace serial {
DriftSurvey survey_drift(const CalibrationGrid& grid, const AdcModel& adc,
                         std::size_t n_per_cell, std::uint64_t seed);
}

}  // namespace prva
