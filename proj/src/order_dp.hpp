#pragma once

// Dynamic program for order-dependent (POD and SPOD) kernels.
//
// For a point pair, row[l] holds Gamma_l * P_l where P_l collects the products
// of gamma_{j,nu} eta(y_j, y'_j) over all (u, nu_u) with |nu_u| = l. Folding in
// coordinate j maps
//   row[l] <- row[l] + eta_j * sum_nu gamma_{j,nu} (Gamma_l / Gamma_{l-nu}) row[l-nu],
// and K = sum_l row[l]. Scaling by Gamma_l inside the table keeps entries near
// the size of the kernel value even when Gamma_l itself would overflow.

#include <cmath>
#include <cstddef>
#include <vector>

#include "lki/errors.hpp"
#include "lki/weights.hpp"

namespace lki::detail {

class OrderDependentFactors {
 public:
  explicit OrderDependentFactors(const WeightScheme& scheme) {
    if (const auto* pod = std::get_if<PodWeights>(&scheme)) {
      nu_max_ = 1;
      gamma_ = pod->gamma;
      init_ratios(pod->log_order);
    } else if (const auto* spod = std::get_if<SpodWeights>(&scheme)) {
      nu_max_ = spod->alpha;
      gamma_ = spod->gamma;
      init_ratios(spod->log_order);
    } else {
      throw ConfigError("order-dependent kernel requested for product-form weights");
    }
  }

  int nu_max() const noexcept { return nu_max_; }
  std::size_t dimension() const noexcept { return gamma_.size() / nu_max_; }
  std::size_t width() const noexcept { return dimension() * nu_max_ + 1; }

  double gamma(std::size_t j0, int nu) const noexcept { return gamma_[j0 * nu_max_ + (nu - 1)]; }
  double ratio(std::size_t l, int nu) const noexcept { return ratio_[l * nu_max_ + (nu - 1)]; }

  /// Fold coordinate j0 (0-based) into row, whose nonzero part ends at order top.
  /// Returns the new top.
  std::size_t fold(std::size_t j0, double eta, double* row, std::size_t top) const noexcept {
    const std::size_t new_top = top + nu_max_;
    for (std::size_t l = new_top; l >= 1; --l) {
      double acc = 0.0;
      for (int nu = 1; nu <= nu_max_ && static_cast<std::size_t>(nu) <= l; ++nu) {
        if (l - nu > top) continue;
        acc += gamma(j0, nu) * ratio(l, nu) * row[l - nu];
      }
      row[l] += eta * acc;
    }
    return new_top;
  }

  /// sum_nu gamma_{j0,nu} sum_l ratio(l, nu) row[l - nu], the coefficient of eta_j in the fold.
  double fold_slope(std::size_t j0, const double* row, std::size_t top) const noexcept {
    double slope = 0.0;
    for (int nu = 1; nu <= nu_max_; ++nu) {
      double acc = 0.0;
      for (std::size_t m = 0; m <= top; ++m) acc += ratio(m + nu, nu) * row[m];
      slope += gamma(j0, nu) * acc;
    }
    return slope;
  }

 private:
  void init_ratios(const std::vector<double>& log_order) {
    const std::size_t w = width();
    if (log_order.size() < w) throw ConfigError("order weights do not cover all orders");
    ratio_.assign(w * nu_max_, 0.0);
    for (std::size_t l = 1; l < w; ++l) {
      for (int nu = 1; nu <= nu_max_ && static_cast<std::size_t>(nu) <= l; ++nu) {
        const double r = std::exp(log_order[l] - log_order[l - nu]);
        if (!std::isfinite(r)) throw DomainError("order weight ratio overflows");
        ratio_[l * nu_max_ + (nu - 1)] = r;
      }
    }
  }

  int nu_max_ = 1;
  std::vector<double> gamma_;
  std::vector<double> ratio_;
};

}  // namespace lki::detail
