#include "prva/transform.hpp"

#include <omp.h>

#include <algorithm>
#include <optional>
#include <cmath>
#include <stdexcept>

#include "prva/stats.hpp"

namespace prva {

TransformCoeffs::TransformCoeffs(GaussianSpec src, GaussianSpec dst)
    : src_(src),
      dst_(dst),
      scale_(dst.sigma() / src.sigma()),
      offset_(dst.mean() - scale_ * src.mean()) {
  if (!std::isfinite(scale_) || !std::isfinite(offset_) || !(scale_ > 0.0))
    throw std::invalid_argument("TransformCoeffs: non-finite coefficients");
}

TransformCoeffs make_coeffs(const GaussianSpec& src, const GaussianSpec& dst) {
  return TransformCoeffs(src, dst);
}

TransformCoeffs compensation_coeffs(const SampleTrace& trace, const CalibrationGrid& grid) {
  const NoiseParams p = grid.noise_params(trace.temperature_c(), trace.voltage_v());
  return make_coeffs(GaussianSpec(p.mean, p.sigma), GaussianSpec(0.0, 1.0));
}

std::vector<double> compensate(const SampleTrace& trace, const CalibrationGrid& grid,
                               SeededStream& stream, CompensationSource source) {
  std::vector<double> values;
  std::optional<TransformCoeffs> coeffs;
  if (source == CompensationSource::grid) {
    coeffs = compensation_coeffs(trace, grid);
    values = dequantize_with_jitter(trace, stream);
  } else {
    values = dequantize_with_jitter(trace, stream);
    coeffs = make_coeffs(fit_gaussian(values).spec(), GaussianSpec(0.0, 1.0));
  }
  OpCounter& ops = stream.counter();
  for (double& x : values) x = apply(*coeffs, x, ops);
  return values;
}

double DriftSurvey::grand_raw_mean() const {
  if (cells.empty()) throw std::logic_error("DriftSurvey: no cells");
  double sum = 0.0;
  for (const DriftCell& c : cells) sum += c.raw_mean;
  return sum / static_cast<double>(cells.size());
}

double DriftSurvey::max_raw_mean_deviation() const {
  const double grand = grand_raw_mean();
  double worst = 0.0;
  for (const DriftCell& c : cells) worst = std::max(worst, std::abs(c.raw_mean - grand));
  return worst;
}

double DriftSurvey::max_abs_compensated_mean() const {
  double worst = 0.0;
  for (const DriftCell& c : cells) worst = std::max(worst, std::abs(c.compensated_mean));
  return worst;
}

namespace {

DriftCell survey_cell(const CalibrationGrid& grid, const AdcModel& adc, std::size_t n,
                      std::uint64_t seed, std::size_t index) {
  const std::size_t nv = grid.voltages().size();
  const double t = grid.temperatures()[index / nv];
  const double v = grid.voltages()[index % nv];
  SeededStream stream = SeededStream::derive(seed, index);
  const SampleTrace trace = generate_trace(stream, grid, t, v, adc, n);
  const FitResult raw = fit_gaussian(trace.values());
  const std::vector<double> comp = compensate(trace, grid, stream);
  const FitResult fitted = fit_gaussian(comp);
  return {t, v, raw.mean, raw.sigma, fitted.mean, fitted.sigma};
}

std::size_t cell_count(const CalibrationGrid& grid) {
  return grid.temperatures().size() * grid.voltages().size();
}

}  // namespace

DriftSurvey survey_drift(const CalibrationGrid& grid, const AdcModel& adc, std::size_t n_per_cell,
                         std::uint64_t seed, int threads) {
  if (n_per_cell < 2) throw std::invalid_argument("survey_drift: need >= 2 samples per cell");
  if (threads < 1) throw std::invalid_argument("survey_drift: threads must be >= 1");
  DriftSurvey survey;
  survey.cells.resize(cell_count(grid));
  const auto count = static_cast<std::int64_t>(survey.cells.size());
#pragma omp parallel for num_threads(threads) schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i)
    survey.cells[static_cast<std::size_t>(i)] =
        survey_cell(grid, adc, n_per_cell, seed, static_cast<std::size_t>(i));
  return survey;
}

namespace serial {

DriftSurvey survey_drift(const CalibrationGrid& grid, const AdcModel& adc, std::size_t n_per_cell,
                         std::uint64_t seed) {
  if (n_per_cell < 2) throw std::invalid_argument("survey_drift: need >= 2 samples per cell");
  DriftSurvey survey;
  for (std::size_t i = 0; i < cell_count(grid); ++i)
    survey.cells.push_back(survey_cell(grid, adc, n_per_cell, seed, i));
  return survey;
}

}  // namespace serial

}  // namespace prva
