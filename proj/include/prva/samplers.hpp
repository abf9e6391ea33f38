#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "prva/distributions.hpp"
#include "prva/op_counter.hpp"
#include "prva/rng.hpp"

namespace prva {

// ---------------------------------------------------------------------------
// Inversion

/// F^-1(u) with the cost charged to `ops`. Throws UnsupportedFamilyError for
/// families without a closed-form inverse.
double inversion_transform(double u, const Distribution& d, OpCounter& ops);

template <UniformSource S>
double inversion_sample(S& stream, const Distribution& d) {
  if (std::holds_alternative<GaussianSpec>(d)) throw UnsupportedFamilyError(family_name(d));
  return inversion_transform(stream.uniform01(), d, stream.counter());
}

// ---------------------------------------------------------------------------
// Accept-reject

enum class AcceptTest {
  /// Accept when U <= f(X) / (c u(X)); yields the target truncated to the
  /// proposal support.
  standard,
  /// Accept when U * T <= 1 with T = c f(X) / u(X), as literally printed in
  /// the original algorithm listing. Produces the wrong density; kept only
  /// for side-by-side comparison.
  scaled_ratio,
};

/// Smallest c with c u(x) >= f(x), found by scanning `grid_points` evenly
/// spaced points of the proposal support plus the target mode when it lies
/// inside the support.
double tight_envelope_constant(const GaussianSpec& target, const UniformSpec& proposal,
                               int grid_points = 10000);

class AcceptRejectSampler {
 public:
  static constexpr int kEnvelopeGridPoints = 10000;

  /// Throws std::invalid_argument when the proposal misses [mean - 8 sigma,
  /// mean + 8 sigma] entirely, when c < 1, or when c u(x) < f(x) at any point
  /// of the envelope scan grid.
  AcceptRejectSampler(GaussianSpec target, UniformSpec proposal, double c,
                      AcceptTest test = AcceptTest::standard);

  const GaussianSpec& target() const { return target_; }
  const UniformSpec& proposal() const { return proposal_; }
  double envelope() const { return c_; }
  AcceptTest test() const { return test_; }

  /// Analytic probability that one attempt is accepted under the standard
  /// test: target mass inside the proposal support divided by c.
  double acceptance_probability() const;

  /// Runs attempts until one is accepted. Every attempt takes exactly two
  /// uniform draws and charges at least 14 arithmetic operations (exp, sqrt,
  /// subtractions, a square, the multiply/divide chain and the comparison);
  /// each failure also
  /// bumps OpCounter::rejections.
  template <UniformSource S>
  double sample(S& stream) const {
    OpCounter& ops = stream.counter();
    for (;;) {
      const double u = stream.uniform01();
      const double x = candidate(stream.uniform01(), ops);
      if (accepts(u, x, ops)) return x;
      ++ops.rejections;
    }
  }

  /// One attempt with the two uniforms supplied; returns whether it accepted
  /// and writes the candidate to `x`.
  bool attempt(double u, double f, double& x, OpCounter& ops) const {
    x = candidate(f, ops);
    return accepts(u, x, ops);
  }

 private:
  double candidate(double f, OpCounter& ops) const;
  bool accepts(double u, double x, OpCounter& ops) const;

  GaussianSpec target_;
  UniformSpec proposal_;
  double c_;
  AcceptTest test_;
};

// ---------------------------------------------------------------------------
// Reference Gaussian (Marsaglia polar method; the spare variate is dropped so
// every call is a function of the stream position alone).

double polar_gaussian_attempt(double u1, double u2, bool& accepted, OpCounter& ops);

template <UniformSource S>
double reference_gaussian_sample(S& stream, const GaussianSpec& spec) {
  OpCounter& ops = stream.counter();
  for (;;) {
    const double u1 = stream.uniform01();
    const double u2 = stream.uniform01();
    bool accepted = false;
    const double z = polar_gaussian_attempt(u1, u2, accepted, ops);
    if (accepted) {
      ops.multiplications += 1;
      ops.additions += 1;
      return spec.mean() + spec.sigma() * z;
    }
    ++ops.rejections;
  }
}

}  // namespace prva
