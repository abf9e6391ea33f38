#include "prva/samplers.hpp"

#include <algorithm>

namespace prva {

double inversion_transform(double u, const Distribution& d, OpCounter& ops) {
  struct Visitor {
    double u;
    OpCounter& ops;
    double operator()(const GaussianSpec&) const { throw UnsupportedFamilyError("gaussian"); }
    double operator()(const UniformSpec& s) const {
      ops.multiplications += 1;
      ops.additions += 1;
      return inverse_cdf(u, s);
    }
    double operator()(const ExponentialSpec& s) const {
      ops.additions += 1;
      ops.transcendental_evals += 1;
      ops.divisions += 1;
      return inverse_cdf(u, s);
    }
  };
  return std::visit(Visitor{u, ops}, d);
}

double tight_envelope_constant(const GaussianSpec& target, const UniformSpec& proposal,
                               int grid_points) {
  if (grid_points < 2) throw std::invalid_argument("tight_envelope_constant: need >= 2 points");
  const double step = proposal.width() / (grid_points - 1);
  double best = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double x = i + 1 == grid_points ? proposal.hi() : proposal.lo() + i * step;
    best = std::max(best, gaussian_pdf(x, target) / uniform_pdf(x, proposal));
  }
  const double mode = std::clamp(target.mean(), proposal.lo(), proposal.hi());
  best = std::max(best, gaussian_pdf(mode, target) / uniform_pdf(mode, proposal));
  return best;
}

AcceptRejectSampler::AcceptRejectSampler(GaussianSpec target, UniformSpec proposal, double c,
                                         AcceptTest test)
    : target_(target), proposal_(proposal), c_(c), test_(test) {
  const double reach = 8.0 * target.sigma();
  if (proposal.hi() < target.mean() - reach || proposal.lo() > target.mean() + reach)
    throw std::invalid_argument(
        "accept-reject: proposal support does not overlap the target within 8 sigma");
  if (!(c >= 1.0) || !std::isfinite(c))
    throw std::invalid_argument("accept-reject: envelope constant must be finite and >= 1");

  const int n = kEnvelopeGridPoints;
  const double step = proposal.width() / (n - 1);
  for (int i = 0; i < n; ++i) {
    const double x = i + 1 == n ? proposal.hi() : proposal.lo() + i * step;
    const double f = gaussian_pdf(x, target);
    if (c * uniform_pdf(x, proposal) < f * (1.0 - 1e-12))
      throw std::invalid_argument("accept-reject: envelope c*u(x) < f(x) at x = " +
                                  std::to_string(x));
  }
}

double AcceptRejectSampler::acceptance_probability() const {
  const double mass =
      gaussian_cdf(proposal_.hi(), target_) - gaussian_cdf(proposal_.lo(), target_);
  return mass / c_;
}

double AcceptRejectSampler::candidate(double f, OpCounter& ops) const {
  ops.multiplications += 1;
  ops.additions += 1;
  return proposal_.lo() + proposal_.width() * f;
}

bool AcceptRejectSampler::accepts(double u, double x, OpCounter& ops) const {
  // Density of the target, evaluated operation by operation.
  const double d = x - target_.mean();
  const double z = d / target_.sigma();
  const double z2 = z * z;
  const double e = std::exp(-0.5 * z2);
  const double norm = target_.sigma() * std::sqrt(2.0 * std::numbers::pi);
  const double fx = e / norm;
  const double ux = 1.0 / proposal_.width();
  ops.additions += 1;
  ops.divisions += 3;
  ops.multiplications += 3;
  ops.transcendental_evals += 2;

  ops.multiplications += 1;
  ops.divisions += 1;
  ops.comparisons += 1;
  if (test_ == AcceptTest::standard) return u <= fx / (c_ * ux);
  // T = c f / u; accept when U T <= 1.
  ops.multiplications += 1;
  return u * (c_ * fx / ux) <= 1.0;
}

double polar_gaussian_attempt(double u1, double u2, bool& accepted, OpCounter& ops) {
  const double a = 2.0 * u1 - 1.0;
  const double b = 2.0 * u2 - 1.0;
  const double s = a * a + b * b;
  ops.multiplications += 4;
  ops.additions += 3;
  ops.comparisons += 2;
  accepted = s < 1.0 && s > 0.0;
  if (!accepted) return 0.0;
  ops.transcendental_evals += 2;
  ops.multiplications += 2;
  ops.divisions += 1;
  return a * std::sqrt(-2.0 * std::log(s) / s);
}

}  // namespace prva
