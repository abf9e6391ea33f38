// prva: command-line driver for trace generation, KL analysis, quantization
// sweeps, the transform pipeline and Monte Carlo benchmarks.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "prva/montecarlo.hpp"
#include "prva/report.hpp"
#include "prva/sensor_model.hpp"
#include "prva/stats.hpp"
#include "prva/trace_io.hpp"
#include "prva/transform.hpp"
#include "prva/variate_cache.hpp"

namespace {

using nlohmann::json;

struct Common {
  std::uint64_t seed = 1;
  int threads = 1;
};

struct GridArgs {
  std::string grid_path;
  std::optional<int> bins;
  std::optional<double> adc_lo;
  std::optional<double> adc_hi;

  prva::CalibrationGrid grid() const {
    return grid_path.empty() ? prva::CalibrationGrid::default_grid()
                             : prva::load_calibration(grid_path);
  }
  prva::AdcModel adc(const prva::CalibrationGrid& g) const {
    const prva::AdcModel d = prva::default_adc(g);
    return prva::AdcModel(bins.value_or(d.bin_count()), adc_lo.value_or(d.range_lo()),
                          adc_hi.value_or(d.range_hi()));
  }
};

void add_grid_options(CLI::App* cmd, GridArgs& g) {
  cmd->add_option("--grid", g.grid_path, "Calibration CSV (default: built-in synthetic grid)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--bins", g.bins, "ADC code count (default 4096)")->check(CLI::Range(2, 1 << 24));
  cmd->add_option("--adc-lo", g.adc_lo, "ADC range low end (default: mean - 4 sigma at 10 C, 2.6 V)");
  cmd->add_option("--adc-hi", g.adc_hi, "ADC range high end (default: mean + 4 sigma at 10 C, 2.6 V)");
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << text;
  if (!os) throw std::runtime_error("write failed: " + path);
}

json fit_json(const prva::FitResult& f) { return {{"mean", f.mean}, {"sigma", f.sigma}, {"n", f.n}}; }

// --- generate -------------------------------------------------------------

struct GenerateArgs {
  double temperature = prva::kReferenceTemperatureC;
  double voltage = prva::kReferenceVoltageV;
  std::size_t n = 100000;
  std::string out;
  double sample_rate = prva::kDefaultSampleRateHz;
  std::string source = "synthetic";
  GridArgs grid;
};

int cmd_generate(const Common& c, const GenerateArgs& a) {
  const prva::CalibrationGrid grid = a.grid.grid();
  prva::SeededStream stream(c.seed);
  const prva::SampleTrace trace = prva::generate_trace(stream, grid, a.temperature, a.voltage,
                                                       a.grid.adc(grid), a.n, a.sample_rate, a.source);
  prva::store_trace(trace, a.out);
  const json summary = {{"trace", a.out},
                        {"codes", trace.size()},
                        {"temperature_c", a.temperature},
                        {"voltage_v", a.voltage},
                        {"fit", fit_json(prva::fit_gaussian(trace.values()))}};
  std::cout << summary.dump(2) << '\n';
  return 0;
}

// --- kl -------------------------------------------------------------------

struct KlArgs {
  std::string trace;
  std::string synthetic = "gaussian";
  double mean = 980.794;
  double sigma = 7.178;
  std::size_t n = 100000;
  std::size_t reps = 1;
  std::optional<std::size_t> bins;
  std::string out;
};

int cmd_kl(const Common& c, const KlArgs& a) {
  json report;
  if (!a.trace.empty()) {
    const prva::SampleTrace trace = prva::load_trace(a.trace);
    const std::vector<double> values = trace.values();
    const prva::FitResult fit = prva::fit_gaussian(values);
    const double kl = a.bins ? prva::binned_fit_kl(values, *a.bins) : prva::native_kl(trace);
    report = {{"mode", "trace"},
              {"trace", a.trace},
              {"binning", a.bins ? json(*a.bins) : json("native")},
              {"fit", fit_json(fit)},
              {"kl", kl}};
  } else {
    const prva::GaussianSpec spec(a.mean, a.sigma);
    const auto shape = a.synthetic == "uniform" ? prva::SyntheticShape::uniform_3sigma
                                                : prva::SyntheticShape::gaussian;
    const prva::AdcModel adc = prva::AdcModel::spanning(spec, 4.0, 4096);
    const std::vector<double> kl =
        prva::native_kl_experiment(shape, spec, adc, a.n, a.reps, c.seed, c.threads);
    double sum = 0.0;
    for (double k : kl) sum += k;
    report = {{"mode", a.synthetic == "uniform" ? "uniform_3sigma" : "gaussian"},
              {"spec", {{"mean", a.mean}, {"sigma", a.sigma}}},
              {"n", a.n},
              {"repetitions", a.reps},
              {"binning", "native (one bin per code, 4096 codes over mean +/- 4 sigma)"},
              {"mean_kl", sum / static_cast<double>(kl.size())},
              {"kl", kl}};
  }
  write_text(a.out, report.dump(2) + "\n");
  return 0;
}

// --- sweep ----------------------------------------------------------------

struct SweepArgs {
  double mean = 980.794;
  double sigma = 7.178;
  std::size_t n = 100000;
  std::size_t reps = 100;
  std::vector<std::size_t> bins = {16, 64, 256, 1024, 4096};
  std::string out;
};

int cmd_sweep(const Common& c, const SweepArgs& a) {
  const auto points = prva::quantization_sweep(prva::GaussianSpec(a.mean, a.sigma), a.n, a.bins,
                                               a.reps, c.seed, c.threads);
  write_text(a.out, prva::sweep_to_csv(points));
  return 0;
}

// --- transform ------------------------------------------------------------

struct TransformArgs {
  std::string trace;
  double temperature = prva::kReferenceTemperatureC;
  double voltage = prva::kReferenceVoltageV;
  std::size_t n = 100000;
  double target_mean = 980.794;
  double target_sigma = 7.178;
  std::size_t cache = 4096;
  bool self_calibrate = false;
  bool threaded = false;
  std::string out;
  std::string values_out;
  GridArgs grid;
};

int cmd_transform(const Common& c, const TransformArgs& a) {
  const prva::CalibrationGrid grid = a.grid.grid();
  prva::SeededStream stream(c.seed);
  const prva::SampleTrace trace =
      a.trace.empty()
          ? prva::generate_trace(stream, grid, a.temperature, a.voltage, a.grid.adc(grid), a.n)
          : prva::load_trace(a.trace);
  const std::vector<double> standard = prva::compensate(
      trace, grid, stream,
      a.self_calibrate ? prva::CompensationSource::self_calibrate : prva::CompensationSource::grid);
  const prva::GaussianSpec target(a.target_mean, a.target_sigma);
  prva::OpCounter transform_ops;
  prva::CacheStats cache;
  const std::vector<double> out = prva::run_cached_transform(
      standard, prva::make_coeffs({0.0, 1.0}, target), a.cache, transform_ops, a.threaded, &cache);

  const prva::FitResult fit = prva::fit_gaussian(out);
  const prva::Histogram h = prva::histogram(out, 256, target.mean() - 5 * target.sigma(),
                                            target.mean() + 5 * target.sigma());
  const json report = {
      {"source", a.trace.empty() ? "generated" : a.trace},
      {"temperature_c", trace.temperature_c()},
      {"voltage_v", trace.voltage_v()},
      {"compensation", a.self_calibrate ? "self_calibrate" : "grid"},
      {"target", {{"mean", target.mean()}, {"sigma", target.sigma()}}},
      {"delivered", out.size()},
      {"fit", fit_json(fit)},
      {"kl_vs_target_256_bins", prva::kl_divergence(h, {target.mean(), target.sigma(), out.size()})},
      {"cache",
       {{"capacity", cache.capacity},
        {"high_water_mark", cache.high_water_mark},
        {"produced", cache.produced},
        {"consumed", cache.consumed}}},
      {"transform_ops", prva::to_json(transform_ops)},
      {"transform_ops_per_variate",
       static_cast<double>(transform_ops.arithmetic_ops()) / static_cast<double>(out.size())},
      {"pipeline_ops", prva::to_json(stream.counter())}};
  if (!a.values_out.empty()) {
    std::string text;
    for (double v : out) text += prva::format_real(v) + "\n";
    write_text(a.values_out, text);
  }
  write_text(a.out, report.dump(2) + "\n");
  return 0;
}

// --- benchmark ------------------------------------------------------------

struct BenchmarkArgs {
  double target_mean = 980.794;
  double target_sigma = 7.178;
  std::size_t n = 1000000;
  std::size_t reps = 1000;
  std::vector<std::string> sources = {"uniform:3", "uniform:10", "uniform:100", "uniform:1000",
                                      "gaussian", "prva"};
  std::string json_out;
  std::string csv_out;
  bool omit_timing = false;
  double prva_temperature = 20.0;
  double prva_voltage = 3.0;
  std::string prva_trace;
  std::size_t cache = 4096;
  GridArgs grid;
};

int cmd_benchmark(const Common& c, const BenchmarkArgs& a) {
  std::vector<prva::SourceSpec> sources;
  for (const std::string& s : a.sources) sources.push_back(prva::SourceSpec::parse(s));
  prva::BenchmarkOptions o;
  o.n = a.n;
  o.repetitions = a.reps;
  o.threads = c.threads;
  o.seed = c.seed;
  o.prva.grid = a.grid.grid();
  o.prva.adc = a.grid.adc(o.prva.grid);
  o.prva.temperature_c = a.prva_temperature;
  o.prva.voltage_v = a.prva_voltage;
  o.prva.cache_capacity = a.cache;
  if (!a.prva_trace.empty()) o.prva.trace = prva::load_trace(a.prva_trace);

  const prva::BenchmarkReport report =
      prva::run_benchmark(sources, prva::GaussianSpec(a.target_mean, a.target_sigma), o);
  const bool timing = !a.omit_timing;
  if (!a.json_out.empty()) write_text(a.json_out, prva::to_json(report, timing).dump(2) + "\n");
  if (!a.csv_out.empty()) write_text(a.csv_out, prva::to_csv(report, timing));
  if (a.json_out.empty() && a.csv_out.empty()) std::cout << prva::to_csv(report, timing);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Programmable random variate generation from (simulated) sensor noise"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--seed", common.seed, "Master seed; every random stream derives from it");
  app.add_option("--threads", common.threads, "Worker threads for repetition-parallel work")
      ->check(CLI::PositiveNumber);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate a synthetic sensor trace file");
  generate->add_option("--temp", gen.temperature, "Sensor temperature, C");
  generate->add_option("--volt", gen.voltage, "Supply voltage, V");
  generate->add_option("--n", gen.n, "Number of codes")->check(CLI::PositiveNumber);
  generate->add_option("--out", gen.out, "Trace file to write")->required();
  generate->add_option("--sample-rate", gen.sample_rate, "Recorded sample rate, Hz")->check(CLI::PositiveNumber);
  generate->add_option("--source", gen.source, "Source label stored in the header");
  add_grid_options(generate, gen.grid);

  KlArgs kl;
  auto* klcmd = app.add_subcommand("kl", "KL divergence between data and its fitted Gaussian");
  klcmd->add_option("--trace", kl.trace, "Trace file to analyse")->check(CLI::ExistingFile);
  klcmd->add_option("--synthetic", kl.synthetic, "Synthetic data when no trace: gaussian | uniform")
      ->check(CLI::IsMember({"gaussian", "uniform"}));
  klcmd->add_option("--mean", kl.mean, "Synthetic spec mean");
  klcmd->add_option("--sigma", kl.sigma, "Synthetic spec sigma")->check(CLI::PositiveNumber);
  klcmd->add_option("--n", kl.n, "Samples per repetition")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
  klcmd->add_option("--repetitions,--reps", kl.reps, "Repetitions to average")->check(CLI::PositiveNumber);
  klcmd->add_option("--bins", kl.bins, "Equal-width bins over the data range instead of native codes (trace mode)")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 24));
  klcmd->add_option("--out", kl.out, "Report file (default stdout)");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Mean KL versus bin count");
  sweep->add_option("--mean", sw.mean, "Gaussian mean");
  sweep->add_option("--sigma", sw.sigma, "Gaussian sigma")->check(CLI::PositiveNumber);
  sweep->add_option("--n", sw.n, "Samples per repetition (>= 1000)")->check(CLI::Range(std::size_t{1000}, std::size_t{1} << 40));
  sweep->add_option("--reps", sw.reps, "Repetitions")->check(CLI::PositiveNumber);
  sweep->add_option("--bins", sw.bins, "Bin counts")->delimiter(',')->check(CLI::Range(std::size_t{2}, std::size_t{1} << 24));
  sweep->add_option("--out", sw.out, "CSV file (default stdout)");

  TransformArgs tr;
  auto* transform = app.add_subcommand("transform", "Compensate a trace and retarget it through the variate cache");
  transform->add_option("--trace", tr.trace, "Trace file (default: generate one)")->check(CLI::ExistingFile);
  transform->add_option("--temp", tr.temperature, "Temperature for a generated trace, C");
  transform->add_option("--volt", tr.voltage, "Voltage for a generated trace, V");
  transform->add_option("--n", tr.n, "Codes in a generated trace")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
  transform->add_option("--target-mean", tr.target_mean, "Requested mean");
  transform->add_option("--target-sigma", tr.target_sigma, "Requested sigma")->check(CLI::PositiveNumber);
  transform->add_option("--cache", tr.cache, "Variate cache capacity")->check(CLI::PositiveNumber);
  transform->add_flag("--self-calibrate", tr.self_calibrate, "Fit (mean, sigma) from the trace instead of the grid");
  transform->add_flag("--threaded", tr.threaded, "Run producer and consumer on separate threads");
  transform->add_option("--values-out", tr.values_out, "Write delivered variates, one per line");
  transform->add_option("--out", tr.out, "Report file (default stdout)");
  add_grid_options(transform, tr.grid);

  BenchmarkArgs bm;
  auto* benchmark = app.add_subcommand("benchmark", "Monte Carlo integration benchmark");
  benchmark->add_option("--target-mean", bm.target_mean, "Integrand mean");
  benchmark->add_option("--target-sigma", bm.target_sigma, "Integrand sigma")->check(CLI::PositiveNumber);
  benchmark->add_option("--n", bm.n, "Samples per integration")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
  benchmark->add_option("--reps", bm.reps, "Repetitions per source")->check(CLI::PositiveNumber);
  benchmark->add_option("--sources", bm.sources, "uniform:<k>, gaussian, prva")->delimiter(',');
  benchmark->add_option("--json", bm.json_out, "Full JSON report");
  benchmark->add_option("--csv", bm.csv_out, "One CSV row per source");
  benchmark->add_flag("--omit-timing", bm.omit_timing, "Leave wall-clock fields out (byte-stable output)");
  benchmark->add_option("--prva-temp", bm.prva_temperature, "Operating temperature of the prva source, C");
  benchmark->add_option("--prva-volt", bm.prva_voltage, "Operating voltage of the prva source, V");
  benchmark->add_option("--prva-trace", bm.prva_trace, "Replay this trace for the prva source")->check(CLI::ExistingFile);
  benchmark->add_option("--cache", bm.cache, "Variate cache capacity")->check(CLI::PositiveNumber);
  add_grid_options(benchmark, bm.grid);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) return cmd_generate(common, gen);
    if (*klcmd) return cmd_kl(common, kl);
    if (*sweep) return cmd_sweep(common, sw);
    if (*transform) return cmd_transform(common, tr);
    if (*benchmark) return cmd_benchmark(common, bm);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
