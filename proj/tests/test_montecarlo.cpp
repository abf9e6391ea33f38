#include <algorithm>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "prva/montecarlo.hpp"

using namespace prva;
using doctest::Approx;

namespace {
const GaussianSpec kSensor(980.794, 7.178);
}

TEST_CASE("mc_integrate on an even grid") {
  const int n = 10000;
  std::vector<double> xs;
  const double lo = kSensor.mean() - 8 * kSensor.sigma(), hi = kSensor.mean() + 8 * kSensor.sigma();
  for (int i = 0; i < n; ++i) xs.push_back(lo + (hi - lo) * i / (n - 1));
  const IntegrationResult r = mc_integrate(xs, kSensor);
  CHECK(std::abs(r.area - 1.0) < 1e-6);
  CHECK(r.error < 1e-6);
  CHECK(r.error == std::abs(1.0 - r.area));
  CHECK(r.n == n);

  // Independent quadrature of the same density over the same interval.
  const double simpson = test::simpson([](double x) { return test::normal_density(x, 980.794, 7.178); },
                                       lo, hi, 200000);
  CHECK(std::abs(r.area - simpson) < 1e-6);
}

TEST_CASE("mc_integrate degenerate inputs") {
  const IntegrationResult r = mc_integrate({kSensor.mean(), kSensor.mean()}, kSensor);
  CHECK(r.area == 0.0);
  CHECK(r.error == 1.0);
  CHECK_THROWS_AS(mc_integrate({1.0}, kSensor), std::invalid_argument);
}

TEST_CASE("area does not depend on sample order") {
  SeededStream s(3);
  std::vector<double> xs(5000);
  for (double& x : xs) x = kSensor.mean() + 30.0 * (s.uniform01() - 0.5);
  const double a = mc_integrate(xs, kSensor).area;
  std::mt19937_64 rng(1);
  for (int k = 0; k < 5; ++k) {
    std::shuffle(xs.begin(), xs.end(), rng);
    CHECK(std::abs(mc_integrate(xs, kSensor).area - a) < 1e-12);
  }

  // The sort inside is a permutation: integrating an explicitly sorted copy
  // with trapezoid_area gives the identical result.
  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::is_permutation(sorted.begin(), sorted.end(), xs.begin()));
  CHECK(trapezoid_area(sorted, kSensor) == a);
}

TEST_CASE("source parsing") {
  CHECK(SourceSpec::parse("gaussian").kind == SourceKind::gaussian);
  CHECK(SourceSpec::parse("prva").kind == SourceKind::prva);
  const SourceSpec u = SourceSpec::parse("uniform:100");
  CHECK(u.kind == SourceKind::uniform);
  CHECK(u.half_width_sigmas == 100.0);
  CHECK(u.label() == "uniform:100");
  CHECK(SourceSpec::parse("uniform:2.5").label() == "uniform:2.5");
  CHECK_THROWS_AS(SourceSpec::parse("laplace"), std::invalid_argument);
  CHECK_THROWS_AS(SourceSpec::parse("uniform:"), std::invalid_argument);
  CHECK_THROWS_AS(SourceSpec::parse("uniform:-3"), std::invalid_argument);
  CHECK_THROWS_AS(SourceSpec::parse("uniform:3x"), std::invalid_argument);
}

TEST_CASE("run_benchmark") {
  const std::vector<SourceSpec> sources = {SourceSpec::parse("uniform:3"), SourceSpec::parse("gaussian"),
                                           SourceSpec::parse("prva"), SourceSpec::parse("uniform:1000")};
  BenchmarkOptions o;
  o.n = 20000;
  o.repetitions = 12;
  o.seed = 5;

  o.threads = 1;
  const BenchmarkReport one = run_benchmark(sources, kSensor, o);
  o.threads = 4;
  const BenchmarkReport four = run_benchmark(sources, kSensor, o);
  const BenchmarkReport ref = serial::run_benchmark(sources, kSensor, o);

  REQUIRE(one.configurations.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(one.configurations[i].errors == four.configurations[i].errors);
    CHECK(one.configurations[i].errors == ref.configurations[i].errors);
    CHECK(one.configurations[i].mean_error == four.configurations[i].mean_error);
    CHECK(one.configurations[i].ops == four.configurations[i].ops);
    const auto& c = one.configurations[i];
    CHECK(c.error_ci90.lo <= c.mean_error);
    CHECK(c.error_ci90.hi >= c.mean_error);
    CHECK(c.repetitions == 12);
  }

  SUBCASE("gaussian source ignores the rest of the source list") {
    const std::vector<SourceSpec> alone = {SourceSpec::parse("gaussian")};
    CHECK(run_benchmark(alone, kSensor, o).find("gaussian").errors == one.find("gaussian").errors);
  }

  SUBCASE("truncating at 3 sigma costs more than sampling the target") {
    CHECK(one.find("uniform:3").mean_error > one.find("gaussian").mean_error);
    // Missing mass beyond 3 sigma is 0.0027.
    CHECK(one.find("uniform:3").mean_error == Approx(0.0027).epsilon(0.05));
  }

  SUBCASE("operation counts") {
    const auto& u = one.find("uniform:3");
    CHECK(u.ops.uniform_draws == o.n * o.repetitions);
    const auto& p = one.find("prva");
    // Jitter draw per variate; compensation and retarget are 2 ops each.
    CHECK(p.ops.uniform_draws == o.n * o.repetitions);
  }

  SUBCASE("errors") {
    BenchmarkOptions bad = o;
    bad.repetitions = 0;
    CHECK_THROWS_AS(run_benchmark(sources, kSensor, bad), std::invalid_argument);
    bad = o;
    bad.n = 1;
    CHECK_THROWS_AS(run_benchmark(sources, kSensor, bad), std::invalid_argument);
    CHECK_THROWS_AS(one.find("uniform:7"), std::out_of_range);
  }
}

TEST_CASE("prva source replays a stored trace") {
  BenchmarkOptions o;
  o.n = 5000;
  o.repetitions = 3;
  const CalibrationGrid grid = CalibrationGrid::default_grid();
  SeededStream s(8);
  o.prva.trace = generate_trace(s, grid, 10.0, 2.6, default_adc(grid), 5000);
  const std::vector<SourceSpec> prva = {SourceSpec::parse("prva")};
  const BenchmarkReport r = run_benchmark(prva, kSensor, o);
  CHECK(r.find("prva").mean_error < 0.01);

  o.n = 6000;
  CHECK_THROWS_AS(run_benchmark(prva, kSensor, o), std::invalid_argument);
}
