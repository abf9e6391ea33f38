#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "prva/sensor_model.hpp"

namespace prva {

/// Trace files are a key=value header (bins, range_lo, range_hi,
/// temperature_c, voltage_v, sample_rate_hz, source, and an optional count),
/// one blank line, then one decimal code per line. Reals are written in
/// shortest round-trip form, so store followed by load is bit-exact.
class TraceFormatError : public std::runtime_error {
 public:
  enum class Kind { malformed_header, malformed_body, code_out_of_range, truncated_body, io };

  TraceFormatError(Kind kind, const std::string& what);
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

void write_trace(std::ostream& os, const SampleTrace& trace);
SampleTrace read_trace(std::istream& is);

void store_trace(const SampleTrace& trace, const std::filesystem::path& path);
SampleTrace load_trace(const std::filesystem::path& path);

/// CSV with header `temperature_c,voltage_v,mean,sigma`, one row per cell.
/// Loading rejects grids with missing or duplicate cells.
class CalibrationFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_calibration(std::ostream& os, const CalibrationGrid& grid);
CalibrationGrid read_calibration(std::istream& is);

void store_calibration(const CalibrationGrid& grid, const std::filesystem::path& path);
CalibrationGrid load_calibration(const std::filesystem::path& path);

/// Shortest decimal that parses back to exactly `x`.
std::string format_real(double x);

}  // namespace prva
