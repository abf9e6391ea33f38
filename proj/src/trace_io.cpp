#include "prva/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

namespace prva {

TraceFormatError::TraceFormatError(Kind kind, const std::string& what)
    : std::runtime_error(what), kind_(kind) {}

std::string format_real(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw std::runtime_error("format_real: conversion failed");
  return std::string(buf, end);
}

namespace {

using Kind = TraceFormatError::Kind;

std::optional<double> parse_real(std::string_view s) {
  double x = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc{} || end != s.data() + s.size()) return std::nullopt;
  return x;
}

template <class Int>
std::optional<Int> parse_int(std::string_view s) {
  Int x = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc{} || end != s.data() + s.size() || s.empty()) return std::nullopt;
  return x;
}

std::string_view trim_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

}  // namespace

void write_trace(std::ostream& os, const SampleTrace& trace) {
  if (trace.source_label().find('\n') != std::string::npos)
    throw std::invalid_argument("write_trace: source label must not contain newlines");
  os << "bins=" << trace.adc().bin_count() << '\n'
     << "range_lo=" << format_real(trace.adc().range_lo()) << '\n'
     << "range_hi=" << format_real(trace.adc().range_hi()) << '\n'
     << "temperature_c=" << format_real(trace.temperature_c()) << '\n'
     << "voltage_v=" << format_real(trace.voltage_v()) << '\n'
     << "sample_rate_hz=" << format_real(trace.sample_rate_hz()) << '\n'
     << "source=" << trace.source_label() << '\n'
     << "count=" << trace.size() << '\n'
     << '\n';
  std::string body;
  body.reserve(trace.size() * 6);
  char buf[16];
  for (std::int32_t c : trace.codes()) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, c);
    body.append(buf, end);
    body.push_back('\n');
  }
  os << body;
}

SampleTrace read_trace(std::istream& is) {
  std::map<std::string, std::string> header;
  std::string line;
  bool saw_blank = false;
  while (std::getline(is, line)) {
    std::string_view l = trim_cr(line);
    if (l.empty()) {
      saw_blank = true;
      break;
    }
    const auto eq = l.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw TraceFormatError(Kind::malformed_header, "trace header line without key=value: " + line);
    std::string key(l.substr(0, eq));
    if (!header.emplace(key, std::string(l.substr(eq + 1))).second)
      throw TraceFormatError(Kind::malformed_header, "duplicate trace header key: " + key);
  }
  if (!saw_blank)
    throw TraceFormatError(Kind::malformed_header, "trace header not terminated by a blank line");

  static const std::set<std::string> known = {"bins",      "range_lo",       "range_hi",
                                              "temperature_c", "voltage_v", "sample_rate_hz",
                                              "source",    "count"};
  for (const auto& [k, v] : header)
    if (!known.contains(k)) throw TraceFormatError(Kind::malformed_header, "unknown trace header key: " + k);

  auto require = [&](const char* key) -> const std::string& {
    auto it = header.find(key);
    if (it == header.end())
      throw TraceFormatError(Kind::malformed_header, std::string("missing trace header key: ") + key);
    return it->second;
  };
  auto real = [&](const char* key) {
    auto v = parse_real(require(key));
    if (!v) throw TraceFormatError(Kind::malformed_header, std::string("bad real for ") + key);
    return *v;
  };

  auto bins = parse_int<int>(require("bins"));
  if (!bins) throw TraceFormatError(Kind::malformed_header, "bad integer for bins");
  const double lo = real("range_lo");
  const double hi = real("range_hi");
  const double temperature = real("temperature_c");
  const double voltage = real("voltage_v");
  const double rate = real("sample_rate_hz");
  const std::string source = require("source");
  std::optional<std::size_t> count;
  if (header.contains("count")) {
    count = parse_int<std::size_t>(header["count"]);
    if (!count) throw TraceFormatError(Kind::malformed_header, "bad integer for count");
  }

  std::optional<AdcModel> adc;
  try {
    adc.emplace(*bins, lo, hi);
  } catch (const std::invalid_argument& e) {
    throw TraceFormatError(Kind::malformed_header, e.what());
  }
  if (!(rate > 0.0)) throw TraceFormatError(Kind::malformed_header, "sample_rate_hz must be > 0");

  std::vector<std::int32_t> codes;
  if (count) codes.reserve(*count);
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (is.eof())
      throw TraceFormatError(Kind::truncated_body,
                             "trace body ends mid-line at code " + std::to_string(line_no));
    auto code = parse_int<std::int32_t>(trim_cr(line));
    if (!code)
      throw TraceFormatError(Kind::malformed_body, "trace body line " + std::to_string(line_no) +
                                                       " is not an integer: " + line);
    if (*code < 0 || *code >= *bins)
      throw TraceFormatError(Kind::code_out_of_range,
                             "trace code " + std::to_string(*code) + " outside [0, " +
                                 std::to_string(*bins) + ") at body line " + std::to_string(line_no));
    codes.push_back(*code);
  }
  if (count && codes.size() < *count)
    throw TraceFormatError(Kind::truncated_body, "trace body has " + std::to_string(codes.size()) +
                                                     " codes, header promises " + std::to_string(*count));
  if (count && codes.size() > *count)
    throw TraceFormatError(Kind::malformed_body, "trace body has more codes than header count");
  if (codes.empty()) throw TraceFormatError(Kind::truncated_body, "trace body is empty");

  return SampleTrace(std::move(codes), *adc, temperature, voltage, rate, source);
}

void store_trace(const SampleTrace& trace, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw TraceFormatError(Kind::io, "cannot open " + path.string() + " for writing");
  write_trace(os, trace);
  if (!os) throw TraceFormatError(Kind::io, "write failed: " + path.string());
}

SampleTrace load_trace(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw TraceFormatError(Kind::io, "cannot open " + path.string());
  return read_trace(is);
}

// ---------------------------------------------------------------------------

void write_calibration(std::ostream& os, const CalibrationGrid& grid) {
  os << "temperature_c,voltage_v,mean,sigma\n";
  for (std::size_t t = 0; t < grid.temperatures().size(); ++t)
    for (std::size_t v = 0; v < grid.voltages().size(); ++v) {
      const NoiseParams& c = grid.cell(t, v);
      os << format_real(grid.temperatures()[t]) << ',' << format_real(grid.voltages()[v]) << ','
         << format_real(c.mean) << ',' << format_real(c.sigma) << '\n';
    }
}

CalibrationGrid read_calibration(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || trim_cr(line) != "temperature_c,voltage_v,mean,sigma")
    throw CalibrationFormatError("calibration CSV must start with temperature_c,voltage_v,mean,sigma");

  std::map<std::pair<double, double>, NoiseParams> rows;
  std::set<double> temps, volts;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    std::string_view l = trim_cr(line);
    if (l.empty()) continue;
    double field[4];
    for (int k = 0; k < 4; ++k) {
      const auto comma = l.find(',');
      const bool last = k == 3;
      if (last != (comma == std::string_view::npos))
        throw CalibrationFormatError("calibration line " + std::to_string(line_no) +
                                     ": expected 4 fields");
      auto v = parse_real(last ? l : l.substr(0, comma));
      if (!v)
        throw CalibrationFormatError("calibration line " + std::to_string(line_no) +
                                     ": bad number");
      field[k] = *v;
      if (!last) l.remove_prefix(comma + 1);
    }
    if (!rows.emplace(std::pair{field[0], field[1]}, NoiseParams{field[2], field[3]}).second)
      throw CalibrationFormatError("calibration line " + std::to_string(line_no) + ": duplicate cell");
    temps.insert(field[0]);
    volts.insert(field[1]);
  }
  if (rows.size() != temps.size() * volts.size())
    throw CalibrationFormatError("calibration grid is not rectangular: " +
                                 std::to_string(rows.size()) + " cells for " +
                                 std::to_string(temps.size()) + " temperatures x " +
                                 std::to_string(volts.size()) + " voltages");
  std::vector<double> t_axis(temps.begin(), temps.end());
  std::vector<double> v_axis(volts.begin(), volts.end());
  std::vector<NoiseParams> cells;
  for (double t : t_axis)
    for (double v : v_axis) cells.push_back(rows.at({t, v}));
  try {
    return CalibrationGrid(std::move(t_axis), std::move(v_axis), std::move(cells));
  } catch (const std::invalid_argument& e) {
    throw CalibrationFormatError(e.what());
  }
}

void store_calibration(const CalibrationGrid& grid, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw CalibrationFormatError("cannot open " + path.string() + " for writing");
  write_calibration(os, grid);
}

CalibrationGrid load_calibration(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw CalibrationFormatError("cannot open " + path.string());
  return read_calibration(is);
}

}  // namespace prva
