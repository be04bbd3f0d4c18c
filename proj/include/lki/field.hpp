#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lki/weights.hpp"

namespace lki {

/// Diffusion coefficient a(x, y) = 1 + sum_{j=1}^{s} sin(2 pi y_j) psi_j(x) on D = (0,1)^2,
/// psi_j(x) = c j^{-theta} sin(j pi x1) sin(j pi x2).
class FieldSpec {
 public:
  explicit FieldSpec(const ProblemParams& params);

  const ProblemParams& params() const noexcept { return params_; }
  const DerivedParams& derived() const noexcept { return derived_; }
  std::size_t s() const noexcept { return params_.s; }

  /// sup-norm of psi_j, c j^{-theta}; j is 1-based.
  double amplitude(std::size_t j) const { return amplitude_.at(j - 1); }
  double psi(std::size_t j, double x1, double x2) const;

  /// Periodic parametrisation; coordinates of y beyond s are ignored.
  double eval(double x1, double x2, std::span<const double> y) const;

  /// Affine parametrisation a = 1 + sum z_j psi_j, z in [-1,1]^s.
  double eval_affine(double x1, double x2, std::span<const double> z) const;

 private:
  ProblemParams params_;
  DerivedParams derived_;
  std::vector<double> amplitude_;
};

/// z_j = sin(2 pi y_j).
std::vector<double> periodic_to_affine(std::span<const double> y);

/// y_j = arcsin(z_j) / (2 pi), the branch in [-1/4, 1/4]. Throws DomainError for |z_j| > 1.
std::vector<double> affine_to_periodic(std::span<const double> z);

/// CDF of the arcsine law on [-1, 1], F(t) = 1/2 + arcsin(t) / pi (clamped outside).
double arcsine_cdf(double t);

/// Kolmogorov distance between the empirical law of sin(2 pi U), U uniform on [0,1),
/// and the arcsine law. Needs at least 10^4 samples.
double transform_cdf_distance(std::size_t sample_count, std::uint64_t seed);

}  // namespace lki
