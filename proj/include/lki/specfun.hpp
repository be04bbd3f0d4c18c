#pragma once

#include <cstdint>

namespace lki {

/// Smoothness order alpha of the periodic Sobolev space, restricted to {1, 2, 3}.
class SmoothnessOrder {
 public:
  static constexpr int kMin = 1;
  static constexpr int kMax = 3;

  explicit SmoothnessOrder(int alpha);

  int value() const noexcept { return value_; }
  friend bool operator==(SmoothnessOrder, SmoothnessOrder) = default;

 private:
  int value_;
};

namespace specfun {

/// Fractional part mapped into [0, 1); negative arguments wrap, e.g. frac(-0.4) = 0.6.
double frac(double x) noexcept;

/// Bernoulli polynomial B_order(t) for order in {2, 4, 6}.
double bernoulli_poly(int order, double t);

/// Stirling number of the second kind S(nu, m); zero when m > nu.
std::uint64_t stirling2(unsigned nu, unsigned m);

/// Smallest admissible zeta argument.
inline constexpr double kZetaMinArgument = 1.001;

/// Riemann zeta for x > kZetaMinArgument, absolute accuracy 1e-12.
double zeta(double x);

/// Normalising factor (2 pi)^{2a} / ((-1)^{a+1} (2a)!) multiplying B_{2a}.
double eta_scale(SmoothnessOrder alpha) noexcept;

/// Univariate kernel factor eta_alpha(y, y2), periodic in both arguments.
double eta(SmoothnessOrder alpha, double y, double y2);

}  // namespace specfun
}  // namespace lki
