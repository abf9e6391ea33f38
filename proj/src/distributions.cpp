#include "prva/distributions.hpp"

#include <cmath>
#include <numbers>

namespace prva {

GaussianSpec::GaussianSpec(double mean, double sigma) : mean_(mean), sigma_(sigma) {
  if (!std::isfinite(mean)) throw std::invalid_argument("GaussianSpec: mean must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("GaussianSpec: sigma must be positive and finite");
}

UniformSpec::UniformSpec(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw std::invalid_argument("UniformSpec: requires finite lo < hi");
}

ExponentialSpec::ExponentialSpec(double rate) : rate_(rate) {
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw std::invalid_argument("ExponentialSpec: rate must be positive and finite");
}

std::string family_name(const Distribution& d) {
  struct Visitor {
    std::string operator()(const GaussianSpec&) const { return "gaussian"; }
    std::string operator()(const UniformSpec&) const { return "uniform"; }
    std::string operator()(const ExponentialSpec&) const { return "exponential"; }
  };
  return std::visit(Visitor{}, d);
}

UnsupportedFamilyError::UnsupportedFamilyError(const std::string& family)
    : std::invalid_argument("no closed-form inverse CDF for the " + family + " family"),
      family_(family) {}

double gaussian_pdf(double x, const GaussianSpec& spec) {
  const double z = (x - spec.mean()) / spec.sigma();
  return std::exp(-0.5 * z * z) / (spec.sigma() * std::sqrt(2.0 * std::numbers::pi));
}

double gaussian_cdf(double x, const GaussianSpec& spec) {
  const double z = (x - spec.mean()) / spec.sigma();
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double uniform_pdf(double x, const UniformSpec& spec) {
  if (x < spec.lo() || x > spec.hi()) return 0.0;
  return 1.0 / spec.width();
}

double uniform_cdf(double x, const UniformSpec& spec) {
  if (x <= spec.lo()) return 0.0;
  if (x >= spec.hi()) return 1.0;
  return (x - spec.lo()) / spec.width();
}

double exponential_pdf(double x, const ExponentialSpec& spec) {
  return x < 0.0 ? 0.0 : spec.rate() * std::exp(-spec.rate() * x);
}

double exponential_cdf(double x, const ExponentialSpec& spec) {
  return x <= 0.0 ? 0.0 : -std::expm1(-spec.rate() * x);
}

double cdf(double x, const Distribution& d) {
  struct Visitor {
    double x;
    double operator()(const GaussianSpec& s) const { return gaussian_cdf(x, s); }
    double operator()(const UniformSpec& s) const { return uniform_cdf(x, s); }
    double operator()(const ExponentialSpec& s) const { return exponential_cdf(x, s); }
  };
  return std::visit(Visitor{x}, d);
}

double inverse_cdf(double p, const Distribution& d) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("inverse_cdf: probability outside [0, 1]");
  struct Visitor {
    double p;
    double operator()(const GaussianSpec&) const { throw UnsupportedFamilyError("gaussian"); }
    double operator()(const UniformSpec& s) const { return s.lo() + p * s.width(); }
    double operator()(const ExponentialSpec& s) const { return -std::log1p(-p) / s.rate(); }
  };
  return std::visit(Visitor{p}, d);
}

}  // namespace prva
