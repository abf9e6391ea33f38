#pragma once

#include <cstdint>

namespace prva {

/// Tally of the work spent producing variates. Counts only ever grow within
/// a session; per-stream counters are combined with operator+=.
struct OpCounter {
  std::uint64_t multiplications = 0;
  std::uint64_t additions = 0;  // subtractions included
  std::uint64_t divisions = 0;
  std::uint64_t comparisons = 0;
  std::uint64_t transcendental_evals = 0;  // exp, log, sqrt
  std::uint64_t uniform_draws = 0;
  std::uint64_t rejections = 0;

  /// Every counted operation except draws and rejections.
  std::uint64_t arithmetic_ops() const {
    return multiplications + additions + divisions + comparisons + transcendental_evals;
  }

  OpCounter& operator+=(const OpCounter& o) {
    multiplications += o.multiplications;
    additions += o.additions;
    divisions += o.divisions;
    comparisons += o.comparisons;
    transcendental_evals += o.transcendental_evals;
    uniform_draws += o.uniform_draws;
    rejections += o.rejections;
    return *this;
  }

  friend bool operator==(const OpCounter&, const OpCounter&) = default;
};

}  // namespace prva
