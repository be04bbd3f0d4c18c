#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "lki/specfun.hpp"

namespace lki {

/// Parameters of the random diffusion field: psi_j = c j^{-theta} sin(j pi x1) sin(j pi x2).
struct ProblemParams {
  double theta = 0.0;  ///< decay rate, > 1
  double c = 0.0;      ///< fluctuation magnitude, < 1 / zeta(theta)
  double p = 0.0;      ///< summability exponent in (1/theta, 1)
  std::size_t s = 0;   ///< truncation dimension
};

struct DerivedParams {
  SmoothnessOrder alpha{1};
  double lambda = 1.0;
  double a_min = 1.0;
  double a_max = 1.0;
  std::vector<double> b;  ///< b_j = c j^{-theta} / a_min, j = 1..s
};

/// alpha = floor(1/p + 1/2), lambda = p / (2 - p), a_min/a_max = 1 -/+ c zeta(theta).
DerivedParams derive_params(const ProblemParams& params);

// Weight schemes. Per-dimension data is stored 0-based: gamma[j - 1] belongs to
// coordinate j. Order-dependent factors Gamma_l are kept as log Gamma_l.

/// gamma_u = prod_{j in u} gamma_j
struct ProductWeights {
  std::vector<double> gamma;
};

/// Product weights built from the problem's b_j (no factorial factor).
struct SerendipitousWeights {
  std::vector<double> gamma;
};

/// gamma_u = Gamma_{|u|} prod_{j in u} gamma_j
struct PodWeights {
  std::vector<double> log_order;  ///< log Gamma_l, l = 0..s
  std::vector<double> gamma;
};

/// gamma_u = sum_{nu in {1..alpha}^|u|} Gamma_{|nu|} prod_{j in u} gamma_{j, nu_j}
struct SpodWeights {
  int alpha = 1;
  std::vector<double> log_order;  ///< log Gamma_l, l = 0..s*alpha
  std::vector<double> gamma;      ///< row-major s x alpha: gamma[(j-1)*alpha + (nu-1)]

  double factor(std::size_t j, int nu) const { return gamma[(j - 1) * alpha + (nu - 1)]; }
};

using WeightScheme = std::variant<ProductWeights, SerendipitousWeights, PodWeights, SpodWeights>;

std::string_view scheme_name(const WeightScheme& scheme) noexcept;

/// Number of coordinates covered by the scheme's per-dimension data.
std::size_t scheme_dimension(const WeightScheme& scheme) noexcept;

/// True for schemes whose gamma_u factorise over coordinates.
bool is_product_form(const WeightScheme& scheme) noexcept;

/// Per-dimension factors of a product-form scheme; throws ConfigError otherwise.
std::span<const double> product_factors(const WeightScheme& scheme);

/// Throws ConfigError unless all stored data is finite, per-dimension factors are
/// nonnegative and order factors are present for every reachable order.
void validate(const WeightScheme& scheme);

/// Normaliser sqrt(2 e^{1/e} zeta(2 alpha lambda)) shared by the SPOD and serendipitous formulas.
double weight_normaliser(const DerivedParams& derived);

SerendipitousWeights serendipitous_weights(const DerivedParams& derived);
SpodWeights spod_weights(const DerivedParams& derived);

/// Exact gamma_u by direct evaluation of the scheme's defining formula.
/// u holds 1-based coordinate indices; meant for small |u|.
double weight_of_subset(const WeightScheme& scheme, std::span<const std::size_t> u);

}  // namespace lki
