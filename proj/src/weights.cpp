#include "lki/weights.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <type_traits>

#include "lki/errors.hpp"

namespace lki {

DerivedParams derive_params(const ProblemParams& params) {
  const auto& [theta, c, p, s] = params;
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("summability exponent p = " + std::to_string(p) + " must lie in (0, 1)");
  }
  if (!(theta > specfun::kZetaMinArgument)) {
    throw DomainError("decay rate theta = " + std::to_string(theta) + " must exceed 1");
  }
  if (!(p > 1.0 / theta)) {
    throw DomainError("summability exponent p must exceed 1/theta");
  }
  if (!(c > 0.0)) throw DomainError("fluctuation magnitude c must be positive");
  if (s == 0) throw DomainError("dimension s must be positive");

  const double zeta_theta = specfun::zeta(theta);
  if (c * zeta_theta >= 1.0) {
    throw EllipticityError("c * zeta(theta) = " + std::to_string(c * zeta_theta) +
                           " >= 1 violates uniform ellipticity");
  }

  DerivedParams out;
  out.alpha = SmoothnessOrder(static_cast<int>(std::floor(1.0 / p + 0.5)));
  out.lambda = p / (2.0 - p);
  out.a_min = 1.0 - c * zeta_theta;
  out.a_max = 1.0 + c * zeta_theta;
  out.b.resize(s);
  for (std::size_t j = 1; j <= s; ++j) {
    out.b[j - 1] = c * std::pow(static_cast<double>(j), -theta) / out.a_min;
  }
  return out;
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_factors(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ConfigError(std::string(what) + " must be finite and nonnegative");
    }
  }
}

void check_log_order(std::span<const double> log_order, std::size_t needed) {
  if (log_order.size() < needed) {
    throw ConfigError("order-dependent weights need " + std::to_string(needed) +
                      " entries, got " + std::to_string(log_order.size()));
  }
  for (double v : log_order) {
    if (!std::isfinite(v)) throw ConfigError("log order weights must be finite");
  }
}

}  // namespace

std::string_view scheme_name(const WeightScheme& scheme) noexcept {
  return std::visit(overloaded{[](const ProductWeights&) { return "product"; },
                               [](const SerendipitousWeights&) { return "serendipitous"; },
                               [](const PodWeights&) { return "pod"; },
                               [](const SpodWeights&) { return "spod"; }},
                    scheme);
}

std::size_t scheme_dimension(const WeightScheme& scheme) noexcept {
  return std::visit(
      overloaded{[](const SpodWeights& w) { return w.gamma.size() / static_cast<std::size_t>(w.alpha); },
                 [](const auto& w) { return w.gamma.size(); }},
      scheme);
}

bool is_product_form(const WeightScheme& scheme) noexcept {
  return std::holds_alternative<ProductWeights>(scheme) ||
         std::holds_alternative<SerendipitousWeights>(scheme);
}

std::span<const double> product_factors(const WeightScheme& scheme) {
  if (const auto* w = std::get_if<ProductWeights>(&scheme)) return w->gamma;
  if (const auto* w = std::get_if<SerendipitousWeights>(&scheme)) return w->gamma;
  throw ConfigError("weight scheme '" + std::string(scheme_name(scheme)) +
                    "' is not of product form");
}

void validate(const WeightScheme& scheme) {
  std::visit(overloaded{[](const PodWeights& w) {
                          check_factors(w.gamma, "POD factors");
                          check_log_order(w.log_order, w.gamma.size() + 1);
                        },
                        [](const SpodWeights& w) {
                          if (w.alpha < 1) throw ConfigError("SPOD alpha must be positive");
                          if (w.gamma.size() % static_cast<std::size_t>(w.alpha) != 0) {
                            throw ConfigError("SPOD factor table is not s x alpha");
                          }
                          check_factors(w.gamma, "SPOD factors");
                          check_log_order(w.log_order, w.gamma.size() + 1);
                        },
                        [](const auto& w) { check_factors(w.gamma, "product weights"); }},
             scheme);
}

double weight_normaliser(const DerivedParams& derived) {
  const double e_root = std::exp(1.0 / std::numbers::e);
  return std::sqrt(2.0 * e_root * specfun::zeta(2.0 * derived.alpha.value() * derived.lambda));
}

SerendipitousWeights serendipitous_weights(const DerivedParams& derived) {
  const int alpha = derived.alpha.value();
  const double norm = weight_normaliser(derived);
  const double power = 2.0 / (1.0 + derived.lambda);
  SerendipitousWeights out;
  out.gamma.reserve(derived.b.size());
  for (double b : derived.b) {
    double sum = 0.0;
    double bm = 1.0;
    for (int m = 1; m <= alpha; ++m) {
      bm *= b;
      sum += bm * static_cast<double>(specfun::stirling2(alpha, m)) / norm;
    }
    out.gamma.push_back(std::pow(sum, power));
  }
  return out;
}

SpodWeights spod_weights(const DerivedParams& derived) {
  const int alpha = derived.alpha.value();
  const std::size_t s = derived.b.size();
  const double norm = weight_normaliser(derived);
  const double power = 2.0 / (1.0 + derived.lambda);

  SpodWeights out;
  out.alpha = alpha;
  out.log_order.resize(s * alpha + 1);
  for (std::size_t l = 0; l < out.log_order.size(); ++l) {
    out.log_order[l] = power * std::lgamma(static_cast<double>(l) + 1.0);
  }
  out.gamma.resize(s * alpha);
  for (std::size_t j = 1; j <= s; ++j) {
    for (int nu = 1; nu <= alpha; ++nu) {
      const double base = std::pow(derived.b[j - 1], nu) *
                          static_cast<double>(specfun::stirling2(alpha, nu)) / norm;
      const double g = std::pow(base, power);
      if (!std::isfinite(g)) {
        throw DomainError("SPOD factor gamma_{" + std::to_string(j) + "," + std::to_string(nu) +
                          "} overflows");
      }
      out.gamma[(j - 1) * alpha + (nu - 1)] = g;
    }
  }
  return out;
}

namespace {

double order_factor(std::span<const double> log_order, std::size_t l) {
  if (l >= log_order.size()) throw IndexError("order weight index out of range");
  return std::exp(log_order[l]);
}

// Sum over nu in {1..alpha}^|u| of Gamma_{|nu|} prod gamma_{j, nu_j}, by plain enumeration.
double enumerate_spod(const SpodWeights& w, std::span<const std::size_t> u, std::size_t pos,
                      std::size_t order, double product) {
  if (pos == u.size()) return order_factor(w.log_order, order) * product;
  double acc = 0.0;
  for (int nu = 1; nu <= w.alpha; ++nu) {
    acc += enumerate_spod(w, u, pos + 1, order + nu, product * w.factor(u[pos], nu));
  }
  return acc;
}

}  // namespace

double weight_of_subset(const WeightScheme& scheme, std::span<const std::size_t> u) {
  const std::size_t s = scheme_dimension(scheme);
  for (std::size_t j : u) {
    if (j < 1 || j > s) throw IndexError("coordinate index " + std::to_string(j) + " out of range");
  }
  if (u.empty()) return 1.0;
  return std::visit(overloaded{[&](const PodWeights& w) {
                                double prod = order_factor(w.log_order, u.size());
                                for (std::size_t j : u) prod *= w.gamma[j - 1];
                                return prod;
                              },
                              [&](const SpodWeights& w) { return enumerate_spod(w, u, 0, 0, 1.0); },
                              [&](const auto& w) {
                                double prod = 1.0;
                                for (std::size_t j : u) prod *= w.gamma[j - 1];
                                return prod;
                              }},
                    scheme);
}

}  // namespace lki
