#include "prva/sensor_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "prva/samplers.hpp"

namespace prva {

AdcModel::AdcModel(int bin_count, double range_lo, double range_hi)
    : bin_count_(bin_count), range_lo_(range_lo), range_hi_(range_hi) {
  if (bin_count < 2) throw std::invalid_argument("AdcModel: bin_count must be >= 2");
  if (!std::isfinite(range_lo) || !std::isfinite(range_hi) || !(range_lo < range_hi))
    throw std::invalid_argument("AdcModel: requires finite range_lo < range_hi");
}

AdcModel AdcModel::spanning(const GaussianSpec& spec, double sigmas, int bin_count) {
  return AdcModel(bin_count, spec.mean() - sigmas * spec.sigma(),
                  spec.mean() + sigmas * spec.sigma());
}

int AdcModel::quantize(double x) const {
  if (std::isnan(x)) throw std::domain_error("AdcModel::quantize: NaN input");
  const double pos = std::floor((x - range_lo_) / lsb());
  if (pos < 0.0) return 0;
  if (pos >= bin_count_) return bin_count_ - 1;
  return static_cast<int>(pos);
}

double AdcModel::edge(int code) const {
  if (code >= bin_count_) return range_hi_;
  return range_lo_ + code * lsb();
}

GridRangeError::GridRangeError(std::string axis, double value, double lo, double hi)
    : std::out_of_range([&] {
        std::ostringstream os;
        os << axis << " " << value << " outside calibration grid [" << lo << ", " << hi << "]";
        return os.str();
      }()),
      axis_(std::move(axis)) {}

namespace {

// Returns the permutation that sorts `axis` ascending; throws unless the axis
// is strictly monotone in one direction.
std::vector<std::size_t> ascending_order(const std::vector<double>& axis, const char* name) {
  if (axis.size() < 2)
    throw std::invalid_argument(std::string("CalibrationGrid: ") + name +
                                " axis needs at least 2 points");
  for (double x : axis)
    if (!std::isfinite(x))
      throw std::invalid_argument(std::string("CalibrationGrid: non-finite ") + name);
  std::vector<std::size_t> order(axis.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return axis[a] < axis[b]; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (!(axis[order[i - 1]] < axis[order[i]]))
      throw std::invalid_argument(std::string("CalibrationGrid: duplicate ") + name + " value");
  return order;
}

std::size_t lower_patch(const std::vector<double>& axis, double x) {
  auto it = std::upper_bound(axis.begin(), axis.end(), x);
  std::size_t i = it == axis.begin() ? 0 : static_cast<std::size_t>(it - axis.begin()) - 1;
  return std::min(i, axis.size() - 2);
}

}  // namespace

CalibrationGrid::CalibrationGrid(std::vector<double> temperatures, std::vector<double> voltages,
                                 std::vector<NoiseParams> cells) {
  const auto t_order = ascending_order(temperatures, "temperature");
  const auto v_order = ascending_order(voltages, "voltage");
  if (cells.size() != temperatures.size() * voltages.size())
    throw std::invalid_argument("CalibrationGrid: cell count does not match axes");

  const std::size_t nv = voltages.size();
  temperatures_.reserve(temperatures.size());
  voltages_.reserve(nv);
  for (auto i : t_order) temperatures_.push_back(temperatures[i]);
  for (auto j : v_order) voltages_.push_back(voltages[j]);
  cells_.reserve(cells.size());
  for (auto i : t_order) {
    for (auto j : v_order) {
      const NoiseParams& c = cells[i * nv + j];
      if (!std::isfinite(c.mean) || !(c.sigma > 0.0) || !std::isfinite(c.sigma))
        throw std::invalid_argument("CalibrationGrid: every cell needs finite mean and sigma > 0");
      cells_.push_back(c);
    }
  }
}

CalibrationGrid CalibrationGrid::default_grid() {
  std::vector<double> temps;
  std::vector<double> volts;
  for (int i = 0; i < 7; ++i) temps.push_back(25.0 - 5.0 * i);
  for (int j = 0; j < 12; ++j) volts.push_back((36 - 2 * j) / 10.0);

  // Affine trends anchored at (20 C, 3.0 V) plus small fixed node offsets.
  // The offsets never exceed half a trend step, so every axis stays monotone.
  constexpr double kMean = 980.794, kSigma = 7.178;
  constexpr double kMeanPerC = -0.05, kMeanPerV = 0.4;
  constexpr double kSigmaPerC = -0.03, kSigmaPerV = -0.25;
  std::vector<NoiseParams> cells;
  for (std::size_t i = 0; i < temps.size(); ++i) {
    for (std::size_t j = 0; j < volts.size(); ++j) {
      const double dt = temps[i] - 20.0;
      const double dv = volts[j] - 3.0;
      const int pattern = static_cast<int>((3 * i + 2 * j + 3) % 5) - 2;
      cells.push_back({kMean + kMeanPerC * dt + kMeanPerV * dv + 0.01 * pattern,
                       kSigma + kSigmaPerC * dt + kSigmaPerV * dv + 0.004 * pattern});
    }
  }
  return CalibrationGrid(std::move(temps), std::move(volts), std::move(cells));
}

CalibrationGrid CalibrationGrid::constant(std::vector<double> temperatures,
                                          std::vector<double> voltages, NoiseParams value) {
  std::vector<NoiseParams> cells(temperatures.size() * voltages.size(), value);
  return CalibrationGrid(std::move(temperatures), std::move(voltages), std::move(cells));
}

void CalibrationGrid::check_in_box(double temperature, double voltage) const {
  if (!(temperature >= temperatures_.front() && temperature <= temperatures_.back()))
    throw GridRangeError("temperature", temperature, temperatures_.front(), temperatures_.back());
  if (!(voltage >= voltages_.front() && voltage <= voltages_.back()))
    throw GridRangeError("voltage", voltage, voltages_.front(), voltages_.back());
}

NoiseParams CalibrationGrid::noise_params(double temperature, double voltage) const {
  check_in_box(temperature, voltage);
  return interpolate_in_patch(lower_patch(temperatures_, temperature),
                              lower_patch(voltages_, voltage), temperature, voltage);
}

NoiseParams CalibrationGrid::interpolate_in_patch(std::size_t t, std::size_t v,
                                                  double temperature, double voltage) const {
  if (t + 1 >= temperatures_.size() || v + 1 >= voltages_.size())
    throw std::out_of_range("CalibrationGrid: patch index out of range");
  const double wt = (temperature - temperatures_[t]) / (temperatures_[t + 1] - temperatures_[t]);
  const double wv = (voltage - voltages_[v]) / (voltages_[v + 1] - voltages_[v]);
  const NoiseParams& c00 = cell(t, v);
  const NoiseParams& c01 = cell(t, v + 1);
  const NoiseParams& c10 = cell(t + 1, v);
  const NoiseParams& c11 = cell(t + 1, v + 1);
  auto blend = [&](double a00, double a01, double a10, double a11) {
    const double lo = (1.0 - wv) * a00 + wv * a01;
    const double hi = (1.0 - wv) * a10 + wv * a11;
    return (1.0 - wt) * lo + wt * hi;
  };
  return {blend(c00.mean, c01.mean, c10.mean, c11.mean),
          blend(c00.sigma, c01.sigma, c10.sigma, c11.sigma)};
}

AdcModel default_adc(const CalibrationGrid& grid) {
  const NoiseParams p = grid.noise_params(kReferenceTemperatureC, kReferenceVoltageV);
  return AdcModel::spanning(GaussianSpec(p.mean, p.sigma), 4.0, 4096);
}

SampleTrace::SampleTrace(std::vector<std::int32_t> codes, AdcModel adc, double temperature_c,
                         double voltage_v, double sample_rate_hz, std::string source_label)
    : codes_(std::move(codes)),
      adc_(adc),
      temperature_c_(temperature_c),
      voltage_v_(voltage_v),
      sample_rate_hz_(sample_rate_hz),
      source_label_(std::move(source_label)) {
  if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz))
    throw std::invalid_argument("SampleTrace: sample_rate must be positive");
  for (std::int32_t c : codes_)
    if (c < 0 || c >= adc_.bin_count())
      throw std::out_of_range("SampleTrace: code " + std::to_string(c) + " outside [0, " +
                              std::to_string(adc_.bin_count()) + ")");
}

std::vector<double> SampleTrace::values() const {
  std::vector<double> out;
  out.reserve(codes_.size());
  for (std::int32_t c : codes_) out.push_back(adc_.value(c));
  return out;
}

SampleTrace generate_trace(SeededStream& stream, const CalibrationGrid& grid, double temperature,
                           double voltage, const AdcModel& adc, std::size_t n,
                           double sample_rate_hz, std::string source_label) {
  if (n == 0) throw std::invalid_argument("generate_trace: n must be >= 1");
  const NoiseParams p = grid.noise_params(temperature, voltage);
  const GaussianSpec spec(p.mean, p.sigma);
  std::vector<std::int32_t> codes;
  codes.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    codes.push_back(adc.quantize(reference_gaussian_sample(stream, spec)));
  return SampleTrace(std::move(codes), adc, temperature, voltage, sample_rate_hz,
                     std::move(source_label));
}

SampleTrace quantize_samples(std::span<const double> values, const AdcModel& adc,
                             double temperature_c, double voltage_v, std::string source_label) {
  std::vector<std::int32_t> codes;
  codes.reserve(values.size());
  for (double x : values) codes.push_back(adc.quantize(x));
  return SampleTrace(std::move(codes), adc, temperature_c, voltage_v, kDefaultSampleRateHz,
                     std::move(source_label));
}

}  // namespace prva
