#include <cmath>
#include <vector>

#include "doctest.h"
#include "prva/samplers.hpp"
#include "prva/stats.hpp"
#include "prva/transform.hpp"

using namespace prva;
using doctest::Approx;

TEST_CASE("make_coeffs") {
  const GaussianSpec a(3.0, 2.0);
  const TransformCoeffs id = make_coeffs(a, a);
  CHECK(id.scale() == 1.0);
  CHECK(id.offset() == 0.0);

  const TransformCoeffs up = make_coeffs({0, 1}, {980.794, 7.178});
  CHECK(up.scale() == 7.178);
  CHECK(up.offset() == 980.794);

  const TransformCoeffs down = make_coeffs({5, 2}, {0, 1});
  CHECK(down.scale() == 0.5);
  CHECK(down.offset() == -2.5);
  CHECK(down.source() == GaussianSpec(5, 2));
  CHECK(down.target() == GaussianSpec(0, 1));
}

TEST_CASE("apply") {
  const TransformCoeffs id = make_coeffs({1, 1}, {1, 1});
  CHECK(apply(id, 3.7) == 3.7);
  CHECK(apply(make_coeffs({0, 1}, {980.794, 7.178}), 0.0) == 980.794);

  const GaussianSpec a(-4.0, 0.3), b(980.794, 7.178);
  for (double x : {-10.0, -1.0, 0.0, 0.25, 17.0})
    CHECK(apply(make_coeffs(a, b), apply(make_coeffs(b, a), x)) == Approx(x).epsilon(1e-9));

  OpCounter ops;
  for (int i = 0; i < 100; ++i) apply(id, double(i), ops);
  CHECK(ops.multiplications == 100);
  CHECK(ops.additions == 100);
  CHECK(ops.arithmetic_ops() == 200);
}

TEST_CASE("affine moment law") {
  SeededStream s(4);
  std::vector<double> xs(5000);
  for (double& x : xs) x = 3.0 * s.uniform01() - 1.0;
  const FitResult before = fit_gaussian(xs);
  for (auto [src, dst] : {std::pair{GaussianSpec(0, 1), GaussianSpec(980.794, 7.178)},
                          std::pair{GaussianSpec(2, 5), GaussianSpec(-1, 0.01)}}) {
    const TransformCoeffs c = make_coeffs(src, dst);
    std::vector<double> ys;
    for (double x : xs) ys.push_back(apply(c, x));
    const FitResult after = fit_gaussian(ys);
    CHECK(std::abs(after.mean - (c.scale() * before.mean + c.offset())) < 1e-9);
    CHECK(std::abs(after.sigma - std::abs(c.scale()) * before.sigma) < 1e-9);
  }
}

TEST_CASE("compensate") {
  const CalibrationGrid grid = CalibrationGrid::default_grid();
  const AdcModel adc = default_adc(grid);

  SUBCASE("corners come out standard normal") {
    for (double t : {-5.0, 25.0})
      for (double v : {1.4, 3.6}) {
        SeededStream s(static_cast<std::uint64_t>(t * 100 + v * 10 + 1000));
        const SampleTrace trace = generate_trace(s, grid, t, v, adc, 100000);
        const FitResult f = fit_gaussian(compensate(trace, grid, s));
        CHECK(std::abs(f.mean) < 0.02);
        CHECK(f.sigma >= 0.98);
        CHECK(f.sigma <= 1.02);
      }
  }

  SUBCASE("constant grid is a fixed affine map") {
    const auto flat = CalibrationGrid::constant({0, 30}, {1, 4}, {50.0, 2.0});
    const AdcModel a(1024, 40.0, 60.0);
    SeededStream g(1);
    const SampleTrace t1 = generate_trace(g, flat, 3.0, 1.5, a, 200);
    const SampleTrace t2(t1.codes(), a, 27.0, 3.9, 1154, "moved");
    SeededStream j1(5), j2(5);
    const auto c1 = compensate(t1, flat, j1);
    const auto c2 = compensate(t2, flat, j2);
    CHECK(c1 == c2);
    SeededStream j3(5);
    const auto raw = dequantize_with_jitter(t1, j3);
    for (std::size_t i = 0; i < raw.size(); ++i) CHECK(c1[i] == Approx((raw[i] - 50.0) / 2.0).epsilon(1e-12));
  }

  SUBCASE("retargeted to the benchmark Gaussian") {
    SeededStream s(71);
    const SampleTrace trace = generate_trace(s, grid, 20.0, 3.0, adc, 100000);
    const auto std_normal = compensate(trace, grid, s);
    const TransformCoeffs c = make_coeffs({0, 1}, {980.794, 7.178});
    std::vector<double> ys;
    for (double x : std_normal) ys.push_back(apply(c, x));
    CHECK(std::abs(fit_gaussian(ys).mean - 980.794) < 0.114);
  }

  SUBCASE("self calibration needs no grid coverage") {
    const auto tiny = CalibrationGrid::constant({0, 1}, {0, 1}, {0.0, 1.0});
    SeededStream s(72);
    const SampleTrace trace = generate_trace(s, grid, 25.0, 1.4, adc, 50000);
    const FitResult f = fit_gaussian(compensate(trace, tiny, s, CompensationSource::self_calibrate));
    CHECK(f.mean == Approx(0.0).epsilon(1e-9));
    CHECK(f.sigma == Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(compensate(trace, tiny, s), GridRangeError);
  }
}

TEST_CASE("drift survey: OpenMP kernel matches serial reference") {
  const auto grid = CalibrationGrid::constant({0, 10, 20}, {1, 2}, {100.0, 3.0});
  const AdcModel adc(512, 80, 120);
  const DriftSurvey par = survey_drift(grid, adc, 3000, 5, 4);
  const DriftSurvey ser = serial::survey_drift(grid, adc, 3000, 5);
  REQUIRE(par.cells.size() == 6);
  REQUIRE(ser.cells.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(par.cells[i].raw_mean == ser.cells[i].raw_mean);
    CHECK(par.cells[i].compensated_sigma == ser.cells[i].compensated_sigma);
  }
}
