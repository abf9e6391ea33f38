#pragma once

// Test-only reference computations. Nothing here calls into the library's
// density, CDF or integration code.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>

#include "prva/op_counter.hpp"

namespace prva::test {

inline double normal_density(double x, double mean, double sigma) {
  const double z = (x - mean) / sigma;
  return std::exp(-z * z / 2.0) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

/// Composite Simpson's rule with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

/// Standard normal CDF by quadrature of the density from -12.
inline double normal_cdf_by_quadrature(double z) {
  return simpson([](double t) { return normal_density(t, 0.0, 1.0); }, -12.0, z, 200000);
}

/// Uniform source that returns a fixed value; lets tests force U.
struct ForcedUniform {
  double value;
  OpCounter ops;
  double uniform01() {
    ++ops.uniform_draws;
    return value;
  }
  OpCounter& counter() { return ops; }
};

}  // namespace prva::test
