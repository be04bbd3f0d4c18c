#include "lki/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "lki/errors.hpp"

namespace lki {

FieldSpec::FieldSpec(const ProblemParams& params)
    : params_(params), derived_(derive_params(params)) {
  amplitude_.resize(params.s);
  for (std::size_t j = 1; j <= params.s; ++j) {
    amplitude_[j - 1] = params.c * std::pow(static_cast<double>(j), -params.theta);
  }
}

double FieldSpec::psi(std::size_t j, double x1, double x2) const {
  const double jp = static_cast<double>(j) * std::numbers::pi;
  return amplitude(j) * std::sin(jp * x1) * std::sin(jp * x2);
}

double FieldSpec::eval(double x1, double x2, std::span<const double> y) const {
  if (y.size() < s()) throw ConfigError("parameter point has fewer than s coordinates");
  double a = 1.0;
  for (std::size_t j = 1; j <= s(); ++j) {
    a += std::sin(2.0 * std::numbers::pi * y[j - 1]) * psi(j, x1, x2);
  }
  return a;
}

double FieldSpec::eval_affine(double x1, double x2, std::span<const double> z) const {
  if (z.size() < s()) throw ConfigError("parameter point has fewer than s coordinates");
  double a = 1.0;
  for (std::size_t j = 1; j <= s(); ++j) a += z[j - 1] * psi(j, x1, x2);
  return a;
}

std::vector<double> periodic_to_affine(std::span<const double> y) {
  std::vector<double> z(y.size());
  std::transform(y.begin(), y.end(), z.begin(),
                 [](double v) { return std::sin(2.0 * std::numbers::pi * v); });
  return z;
}

std::vector<double> affine_to_periodic(std::span<const double> z) {
  std::vector<double> y(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (!(std::abs(z[j]) <= 1.0)) {
      throw DomainError("affine coordinate " + std::to_string(z[j]) + " outside [-1, 1]");
    }
    y[j] = std::asin(z[j]) / (2.0 * std::numbers::pi);
  }
  return y;
}

double arcsine_cdf(double t) {
  if (t <= -1.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return 0.5 + std::asin(t) / std::numbers::pi;
}

double transform_cdf_distance(std::size_t sample_count, std::uint64_t seed) {
  if (sample_count < 10000) throw DomainError("transform check needs at least 10^4 samples");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> z(sample_count);
  for (double& v : z) v = std::sin(2.0 * std::numbers::pi * unif(rng));
  std::sort(z.begin(), z.end());
  const double n = static_cast<double>(sample_count);
  double dist = 0.0;
  for (std::size_t i = 0; i < sample_count; ++i) {
    const double f = arcsine_cdf(z[i]);
    dist = std::max({dist, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return dist;
}

}  // namespace lki
