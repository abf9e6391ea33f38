#pragma once

#include <span>
#include <string>

#include "json.hpp"
#include "prva/montecarlo.hpp"
#include "prva/stats.hpp"

namespace prva {

/// Timing fields vary from run to run; leave them out when byte-identical
/// output is wanted.
nlohmann::json to_json(const BenchmarkReport& report, bool include_timing = true);
nlohmann::json to_json(const OpCounter& ops);

/// One row per configuration.
std::string to_csv(const BenchmarkReport& report, bool include_timing = true);

/// `bins,mean_kl` rows.
std::string sweep_to_csv(std::span<const SweepPoint> points);

}  // namespace prva
