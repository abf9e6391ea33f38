#pragma once

#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "prva/distributions.hpp"
#include "prva/op_counter.hpp"
#include "prva/transform.hpp"

namespace prva {

enum class ReadMode { blocking, non_blocking };

/// Bounded FIFO of transformed variates for one producer and one consumer,
/// which may live on different threads. Everything resident was produced
/// for requested_spec().
class VariateCache {
 public:
  VariateCache(std::size_t capacity, GaussianSpec requested_spec);

  VariateCache(const VariateCache&) = delete;
  VariateCache& operator=(const VariateCache&) = delete;

  std::size_t capacity() const { return buffer_.size(); }
  const GaussianSpec& requested_spec() const { return spec_; }

  std::size_t occupancy() const;
  std::size_t high_water_mark() const;
  std::uint64_t produced() const;
  std::uint64_t consumed() const;

  /// False when full.
  bool try_push(double value);
  /// Waits for space. Throws std::logic_error after close().
  void push(double value);
  /// End of stream; a blocking read on an empty closed cache returns nullopt.
  void close();
  bool closed() const;

  /// Oldest resident variate. nullopt means "empty right now" in
  /// non_blocking mode and "empty and closed" in blocking mode.
  std::optional<double> read(ReadMode mode);

 private:
  mutable std::mutex mutex_;
  std::condition_variable not_empty_;
  std::condition_variable not_full_;
  std::vector<double> buffer_;
  GaussianSpec spec_;
  std::size_t head_ = 0;
  std::size_t occupancy_ = 0;
  std::size_t high_water_ = 0;
  std::uint64_t produced_ = 0;
  std::uint64_t consumed_ = 0;
  bool closed_ = false;
};

/// Transforms source values with `coeffs` and pushes them until the cache is
/// full or the source runs out; returns how many source values were used.
/// Throws std::invalid_argument if coeffs.target() differs from the cache's
/// requested spec.
std::size_t fill_cache(VariateCache& cache, std::span<const double> source,
                       const TransformCoeffs& coeffs, OpCounter& ops);

struct CacheStats {
  std::size_t capacity = 0;
  std::size_t high_water_mark = 0;
  std::uint64_t produced = 0;
  std::uint64_t consumed = 0;
};

/// Pushes all of `source` through `coeffs` and a cache of `capacity` and
/// returns what the consumer drained, in order. With `threaded` the producer
/// runs on its own thread and the caller drains with blocking reads;
/// otherwise one thread alternates fill and drain.
std::vector<double> run_cached_transform(std::span<const double> source,
                                         const TransformCoeffs& coeffs, std::size_t capacity,
                                         OpCounter& ops, bool threaded = false,
                                         CacheStats* stats = nullptr);

}  // namespace prva
