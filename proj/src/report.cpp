#include "prva/report.hpp"

#include <sstream>

#include "prva/trace_io.hpp"

namespace prva {

nlohmann::json to_json(const OpCounter& ops) {
  return {{"multiplications", ops.multiplications},
          {"additions", ops.additions},
          {"divisions", ops.divisions},
          {"comparisons", ops.comparisons},
          {"transcendental_evals", ops.transcendental_evals},
          {"uniform_draws", ops.uniform_draws},
          {"rejections", ops.rejections},
          {"arithmetic_ops", ops.arithmetic_ops()}};
}

nlohmann::json to_json(const BenchmarkReport& report, bool include_timing) {
  nlohmann::json configs = nlohmann::json::array();
  for (const ConfigurationResult& c : report.configurations) {
    nlohmann::json j = {{"source", c.source},
                        {"n", c.n},
                        {"repetitions", c.repetitions},
                        {"mean_error", c.mean_error},
                        {"error_ci90", {c.error_ci90.lo, c.error_ci90.hi}},
                        {"ops", to_json(c.ops)},
                        {"errors", c.errors}};
    if (include_timing) {
      j["mean_time_s"] = c.mean_time_s;
      j["time_ci90"] = {c.time_ci90.lo, c.time_ci90.hi};
      j["times_s"] = c.times_s;
    }
    configs.push_back(std::move(j));
  }
  nlohmann::json out = {
      {"target", {{"mean", report.target.mean()}, {"sigma", report.target.sigma()}}},
      {"n", report.n},
      {"repetitions", report.repetitions},
      {"seed", report.seed},
      {"configurations", std::move(configs)}};
  if (include_timing) out["threads"] = report.threads;
  return out;
}

std::string to_csv(const BenchmarkReport& report, bool include_timing) {
  std::ostringstream os;
  os << "source,n,repetitions,mean_error,error_ci90_lo,error_ci90_hi";
  if (include_timing) os << ",mean_time_s,time_ci90_lo,time_ci90_hi";
  os << ",uniform_draws,multiplications,additions,divisions,comparisons,transcendental_evals,"
        "rejections\n";
  for (const ConfigurationResult& c : report.configurations) {
    os << c.source << ',' << c.n << ',' << c.repetitions << ',' << format_real(c.mean_error) << ','
       << format_real(c.error_ci90.lo) << ',' << format_real(c.error_ci90.hi);
    if (include_timing)
      os << ',' << format_real(c.mean_time_s) << ',' << format_real(c.time_ci90.lo) << ','
         << format_real(c.time_ci90.hi);
    os << ',' << c.ops.uniform_draws << ',' << c.ops.multiplications << ',' << c.ops.additions
       << ',' << c.ops.divisions << ',' << c.ops.comparisons << ',' << c.ops.transcendental_evals
       << ',' << c.ops.rejections << '\n';
  }
  return os.str();
}

std::string sweep_to_csv(std::span<const SweepPoint> points) {
  std::ostringstream os;
  os << "bins,mean_kl\n";
  for (const SweepPoint& p : points) os << p.bins << ',' << format_real(p.mean_kl) << '\n';
  return os.str();
}

}  // namespace prva
