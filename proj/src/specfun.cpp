#include "lki/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "lki/errors.hpp"
#include "lki/simd/eta_poly.hpp"

namespace lki {

SmoothnessOrder::SmoothnessOrder(int alpha) : value_(alpha) {
  if (alpha < kMin || alpha > kMax) {
    throw ConfigError("smoothness order " + std::to_string(alpha) +
                      " not supported; expected one of {1, 2, 3}");
  }
}

namespace specfun {

double frac(double x) noexcept {
  double t = x - std::floor(x);
  // x slightly below an integer can round up to exactly 1.
  return t >= 1.0 ? 0.0 : t;
}

double bernoulli_poly(int order, double t) {
  switch (order) {
    case 2:
      return detail::horner(detail::kBernoulli2, t);
    case 4:
      return detail::horner(detail::kBernoulli4, t);
    case 6:
      return detail::horner(detail::kBernoulli6, t);
    default:
      throw ConfigError("Bernoulli polynomial of order " + std::to_string(order) +
                        " not supported; expected one of {2, 4, 6}");
  }
}

std::uint64_t stirling2(unsigned nu, unsigned m) {
  if (m > nu) return 0;
  // Row-by-row recurrence S(v, k) = k S(v-1, k) + S(v-1, k-1).
  std::vector<std::uint64_t> row(m + 1, 0);
  row[0] = 1;
  for (unsigned v = 1; v <= nu; ++v) {
    for (unsigned k = std::min(v, m); k >= 1; --k) row[k] = k * row[k] + row[k - 1];
    row[0] = 0;
  }
  return row[m];
}

double zeta(double x) {
  if (!(x > kZetaMinArgument)) {
    throw DomainError("zeta(" + std::to_string(x) + "): argument must exceed " +
                      std::to_string(kZetaMinArgument));
  }
  // Partial sum up to N-1, then Euler-Maclaurin tail starting at N.
  constexpr int N = 64;
  double head = 0.0;
  for (int k = N - 1; k >= 1; --k) head += std::pow(static_cast<double>(k), -x);

  const double nn = N;
  double tail = std::pow(nn, 1.0 - x) / (x - 1.0) + 0.5 * std::pow(nn, -x);
  // B_{2i} / (2i)! for i = 1..5
  constexpr std::array<double, 5> coeff{1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0,
                                        -1.0 / 1209600.0, 1.0 / 47900160.0};
  double rising = x;                  // x (x+1) ... (x+2i-2)
  double power = std::pow(nn, -x - 1.0);
  for (std::size_t i = 0; i < coeff.size(); ++i) {
    tail += coeff[i] * rising * power;
    rising *= (x + 2.0 * i + 1.0) * (x + 2.0 * i + 2.0);
    power /= nn * nn;
  }
  return head + tail;
}

double eta_scale(SmoothnessOrder alpha) noexcept {
  switch (alpha.value()) {
    case 1:
      return detail::kEtaScale1;
    case 2:
      return detail::kEtaScale2;
    default:
      return detail::kEtaScale3;
  }
}

double eta(SmoothnessOrder alpha, double y, double y2) {
  return eta_scale(alpha) * bernoulli_poly(2 * alpha.value(), frac(y - y2));
}

}  // namespace specfun
}  // namespace lki
