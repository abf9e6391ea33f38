#pragma once

#include <concepts>
#include <cstdint>
#include <random>

#include "prva/op_counter.hpp"

namespace prva {

/// Anything that hands out uniform [0, 1) doubles and owns an OpCounter.
template <class S>
concept UniformSource = requires(S& s) {
  { s.uniform01() } -> std::convertible_to<double>;
  { s.counter() } -> std::same_as<OpCounter&>;
};

/// splitmix64 finaliser; used to derive independent child seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Reproducible uniform stream over mt19937_64. The engine and the 53-bit
/// mantissa mapping are both fully specified, so a seed pins the exact bit
/// sequence on every conforming platform.
class SeededStream {
 public:
  explicit SeededStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  /// Child stream for task `index` of a run seeded with `master`.
  static SeededStream derive(std::uint64_t master, std::uint64_t index) {
    return SeededStream(mix_seed(mix_seed(master) ^ mix_seed(index + 0x632be59bd9b4e019ULL)));
  }

  double uniform01() {
    ++draws_taken_;
    ++counter_.uniform_draws;
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draws_taken() const { return draws_taken_; }
  OpCounter& counter() { return counter_; }
  const OpCounter& counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t draws_taken_ = 0;
  std::mt19937_64 engine_;
  OpCounter counter_;
};

static_assert(UniformSource<SeededStream>);

}  // namespace prva
