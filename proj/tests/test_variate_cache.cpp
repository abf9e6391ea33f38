#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

#include "doctest.h"
#include "prva/samplers.hpp"
#include "prva/stats.hpp"
#include "prva/variate_cache.hpp"

using namespace prva;

TEST_CASE("FIFO order and occupancy") {
  VariateCache cache(8, GaussianSpec(0, 1));
  for (int i = 0; i < 8; ++i) CHECK(cache.try_push(i));
  CHECK(cache.occupancy() == 8);
  CHECK_FALSE(cache.try_push(99));
  for (int i = 0; i < 8; ++i) CHECK(cache.read(ReadMode::non_blocking) == double(i));
  CHECK(cache.occupancy() == 0);
  CHECK(cache.high_water_mark() == 8);
  CHECK(cache.produced() == 8);
  CHECK(cache.consumed() == 8);
}

TEST_CASE("empty cache signals empty in non-blocking mode") {
  VariateCache cache(4, GaussianSpec(0, 1));
  CHECK_FALSE(cache.read(ReadMode::non_blocking).has_value());
  cache.close();
  CHECK_FALSE(cache.read(ReadMode::blocking).has_value());
  CHECK_THROWS_AS(cache.push(1.0), std::logic_error);
  CHECK_THROWS_AS(VariateCache(0, GaussianSpec(0, 1)), std::invalid_argument);
}

TEST_CASE("fill_cache") {
  const TransformCoeffs c = make_coeffs({0, 1}, {10, 2});
  VariateCache cache(3, GaussianSpec(10, 2));
  const std::vector<double> src = {0, 1, -1, 2, 5};
  OpCounter ops;
  CHECK(fill_cache(cache, src, c, ops) == 3);
  CHECK(ops.arithmetic_ops() == 6);
  CHECK(fill_cache(cache, std::span(src).subspan(3), c, ops) == 0);
  CHECK(ops.arithmetic_ops() == 6);
  CHECK(cache.read(ReadMode::non_blocking) == 10.0);
  CHECK(cache.read(ReadMode::non_blocking) == 12.0);
  CHECK(cache.read(ReadMode::non_blocking) == 8.0);

  VariateCache other(3, GaussianSpec(0, 1));
  CHECK_THROWS_AS(fill_cache(other, src, c, ops), std::invalid_argument);
}

TEST_CASE("single producer and consumer on separate threads") {
  constexpr int kCount = 200000;
  VariateCache cache(64, GaussianSpec(0, 1));
  std::atomic<bool> bad_occupancy = false;
  std::jthread producer([&] {
    for (int i = 0; i < kCount; ++i) {
      cache.push(i);
      if (cache.occupancy() > cache.capacity()) bad_occupancy = true;
    }
    cache.close();
  });
  std::vector<double> got;
  while (auto v = cache.read(ReadMode::blocking)) {
    got.push_back(*v);
    if (cache.occupancy() > cache.capacity()) bad_occupancy = true;
  }
  producer.join();
  CHECK_FALSE(bad_occupancy.load());
  REQUIRE(got.size() == kCount);
  bool in_order = true;
  for (int i = 0; i < kCount; ++i) in_order = in_order && got[i] == i;
  CHECK(in_order);
  CHECK(cache.produced() == kCount);
  CHECK(cache.consumed() == kCount);
  CHECK(cache.high_water_mark() <= 64);
}

TEST_CASE("drained variates follow the requested Gaussian") {
  const GaussianSpec wanted(980.794, 7.178);
  SeededStream s(17);
  std::vector<double> standard(100000);
  for (double& x : standard) x = reference_gaussian_sample(s, GaussianSpec(0, 1));

  for (bool threaded : {false, true}) {
    OpCounter ops;
    const auto out = run_cached_transform(standard, make_coeffs({0, 1}, wanted), 256, ops, threaded);
    REQUIRE(out.size() == standard.size());
    CHECK(ops.arithmetic_ops() == 2 * standard.size());
    CHECK(ops.multiplications == standard.size());
    CHECK(ops.additions == standard.size());
    const FitResult f = fit_gaussian(out);
    CHECK(std::abs(f.mean - wanted.mean()) < 0.114);
    CHECK(std::abs(f.sigma - wanted.sigma()) < 0.081);
    const double kl = kl_divergence(
        histogram(out, 256, wanted.mean() - 5 * wanted.sigma(), wanted.mean() + 5 * wanted.sigma()),
        FitResult{wanted.mean(), wanted.sigma(), out.size()});
    CHECK(kl < 0.01);
  }
}
