#pragma once

// Shared polynomial tables for eta_alpha. Included by the scalar and the
// vector kernels so both evaluate the same Horner scheme.

#include <array>
#include <numbers>

namespace lki::detail {

// Bernoulli polynomials B_2, B_4, B_6, coefficients from the highest degree down.
inline constexpr std::array<double, 3> kBernoulli2{1.0, -1.0, 1.0 / 6.0};
inline constexpr std::array<double, 5> kBernoulli4{1.0, -2.0, 1.0, 0.0, -1.0 / 30.0};
inline constexpr std::array<double, 7> kBernoulli6{1.0, -3.0, 2.5, 0.0, -0.5, 0.0, 1.0 / 42.0};

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// (2 pi)^{2a} / ((-1)^{a+1} (2a)!)
inline constexpr double kEtaScale1 = kTwoPi * kTwoPi / 2.0;
inline constexpr double kEtaScale2 = -(kTwoPi * kTwoPi * kTwoPi * kTwoPi) / 24.0;
inline constexpr double kEtaScale3 =
    (kTwoPi * kTwoPi * kTwoPi * kTwoPi * kTwoPi * kTwoPi) / 720.0;

template <std::size_t N>
constexpr double horner(const std::array<double, N>& c, double t) noexcept {
  double acc = c[0];
  for (std::size_t i = 1; i < N; ++i) acc = acc * t + c[i];
  return acc;
}

}  // namespace lki::detail
