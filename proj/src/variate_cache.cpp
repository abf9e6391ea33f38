#include "prva/variate_cache.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

namespace prva {

VariateCache::VariateCache(std::size_t capacity, GaussianSpec requested_spec)
    : buffer_(capacity), spec_(requested_spec) {
  if (capacity == 0) throw std::invalid_argument("VariateCache: capacity must be >= 1");
}

std::size_t VariateCache::occupancy() const {
  std::lock_guard lock(mutex_);
  return occupancy_;
}

std::size_t VariateCache::high_water_mark() const {
  std::lock_guard lock(mutex_);
  return high_water_;
}

std::uint64_t VariateCache::produced() const {
  std::lock_guard lock(mutex_);
  return produced_;
}

std::uint64_t VariateCache::consumed() const {
  std::lock_guard lock(mutex_);
  return consumed_;
}

bool VariateCache::closed() const {
  std::lock_guard lock(mutex_);
  return closed_;
}

bool VariateCache::try_push(double value) {
  {
    std::lock_guard lock(mutex_);
    if (closed_) throw std::logic_error("VariateCache: push after close");
    if (occupancy_ == buffer_.size()) return false;
    buffer_[(head_ + occupancy_) % buffer_.size()] = value;
    ++occupancy_;
    ++produced_;
    high_water_ = std::max(high_water_, occupancy_);
  }
  not_empty_.notify_one();
  return true;
}

void VariateCache::push(double value) {
  {
    std::unique_lock lock(mutex_);
    not_full_.wait(lock, [&] { return occupancy_ < buffer_.size() || closed_; });
    if (closed_) throw std::logic_error("VariateCache: push after close");
    buffer_[(head_ + occupancy_) % buffer_.size()] = value;
    ++occupancy_;
    ++produced_;
    high_water_ = std::max(high_water_, occupancy_);
  }
  not_empty_.notify_one();
}

void VariateCache::close() {
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
  }
  not_empty_.notify_all();
  not_full_.notify_all();
}

std::optional<double> VariateCache::read(ReadMode mode) {
  double value = 0.0;
  {
    std::unique_lock lock(mutex_);
    if (mode == ReadMode::blocking)
      not_empty_.wait(lock, [&] { return occupancy_ > 0 || closed_; });
    if (occupancy_ == 0) return std::nullopt;
    value = buffer_[head_];
    head_ = (head_ + 1) % buffer_.size();
    --occupancy_;
    ++consumed_;
  }
  not_full_.notify_one();
  return value;
}

std::size_t fill_cache(VariateCache& cache, std::span<const double> source,
                       const TransformCoeffs& coeffs, OpCounter& ops) {
  if (!(coeffs.target() == cache.requested_spec()))
    throw std::invalid_argument("fill_cache: coefficients target a different spec than the cache");
  std::size_t used = 0;
  while (used < source.size()) {
    // Check for room before transforming so a full cache costs nothing.
    if (cache.occupancy() == cache.capacity()) break;
    const bool ok = cache.try_push(apply(coeffs, source[used], ops));
    if (!ok) break;  // unreachable with a single producer
    ++used;
  }
  return used;
}

std::vector<double> run_cached_transform(std::span<const double> source,
                                         const TransformCoeffs& coeffs, std::size_t capacity,
                                         OpCounter& ops, bool threaded, CacheStats* stats) {
  VariateCache cache(capacity, coeffs.target());
  std::vector<double> out;
  out.reserve(source.size());
  auto record = [&] {
    if (stats) *stats = {cache.capacity(), cache.high_water_mark(), cache.produced(), cache.consumed()};
  };

  if (!threaded) {
    std::size_t pos = 0;
    while (pos < source.size()) {
      pos += fill_cache(cache, source.subspan(pos), coeffs, ops);
      while (auto v = cache.read(ReadMode::non_blocking)) out.push_back(*v);
    }
    record();
    return out;
  }

  OpCounter producer_ops;
  std::jthread producer([&] {
    for (double x : source) cache.push(apply(coeffs, x, producer_ops));
    cache.close();
  });
  while (auto v = cache.read(ReadMode::blocking)) out.push_back(*v);
  producer.join();
  ops += producer_ops;
  record();
  return out;
}

}  // namespace prva
