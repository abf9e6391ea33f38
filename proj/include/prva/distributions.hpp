#pragma once

#include <stdexcept>
#include <string>
#include <variant>

namespace prva {

/// Normal distribution parameters. Throws std::invalid_argument unless sigma > 0.
class GaussianSpec {
 public:
  GaussianSpec(double mean, double sigma);

  double mean() const { return mean_; }
  double sigma() const { return sigma_; }

  friend bool operator==(const GaussianSpec&, const GaussianSpec&) = default;

 private:
  double mean_;
  double sigma_;
};

/// Continuous uniform on [lo, hi], lo < hi.
class UniformSpec {
 public:
  UniformSpec(double lo, double hi);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double width() const { return hi_ - lo_; }

  friend bool operator==(const UniformSpec&, const UniformSpec&) = default;

 private:
  double lo_;
  double hi_;
};

class ExponentialSpec {
 public:
  explicit ExponentialSpec(double rate);

  double rate() const { return rate_; }

  friend bool operator==(const ExponentialSpec&, const ExponentialSpec&) = default;

 private:
  double rate_;
};

using Distribution = std::variant<GaussianSpec, UniformSpec, ExponentialSpec>;

std::string family_name(const Distribution& d);

/// Raised when an operation needs a closed-form inverse CDF the family lacks.
class UnsupportedFamilyError : public std::invalid_argument {
 public:
  explicit UnsupportedFamilyError(const std::string& family);
  const std::string& family() const { return family_; }

 private:
  std::string family_;
};

double gaussian_pdf(double x, const GaussianSpec& spec);
/// Evaluated through erfc so that both tails keep full relative precision.
double gaussian_cdf(double x, const GaussianSpec& spec);

double uniform_pdf(double x, const UniformSpec& spec);
double uniform_cdf(double x, const UniformSpec& spec);

double exponential_pdf(double x, const ExponentialSpec& spec);
double exponential_cdf(double x, const ExponentialSpec& spec);

double cdf(double x, const Distribution& d);

/// F^-1(p) for families with a closed form (uniform, exponential).
/// Gaussian is rejected with UnsupportedFamilyError; p outside [0, 1] with
/// std::domain_error.
double inverse_cdf(double p, const Distribution& d);

}  // namespace prva
