#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "lki/specfun.hpp"
#include "lki/weights.hpp"

namespace lki {

namespace detail {
class OrderDependentFactors;
}

/// Generating vector of a rank-1 lattice with nodes t_k = frac(k z / n), k = 1..n.
///
/// Components satisfy 1 <= z_j <= n-1 and gcd(z_j, n) = 1. The single-point
/// lattice n = 1 is admitted with z_j = 0.
class GeneratingVector {
 public:
  GeneratingVector(std::uint32_t n, std::vector<std::uint32_t> z);

  std::uint32_t n() const noexcept { return n_; }
  std::size_t s() const noexcept { return z_.size(); }
  std::span<const std::uint32_t> z() const noexcept { return z_; }

  /// Coordinate j (0-based) of the node with residue index r, i.e. frac(r z_j / n).
  double coordinate(std::uint64_t r, std::size_t j) const noexcept {
    return static_cast<double>((r * z_[j]) % n_) / static_cast<double>(n_);
  }

  /// First d components.
  GeneratingVector truncated(std::size_t d) const;

  friend bool operator==(const GeneratingVector&, const GeneratingVector&) = default;

 private:
  std::uint32_t n_;
  std::vector<std::uint32_t> z_;
};

/// Node t_k for k in 1..n; t_n is the origin.
std::vector<double> node(const GeneratingVector& gv, std::size_t k);

struct CbcOptions {
  /// Weight each subset's contribution by max(|u|, 1). Product-form schemes only.
  bool order_weighted = false;
  /// Search with gamma_u^lambda instead of gamma_u. Product-form schemes only.
  bool lambda_power = false;
  double lambda = 1.0;
};

/// Greedy component-by-component search.
///
/// After d components the criterion is
///   E^2_d = (1/n) sum_{k=1}^{n} (K_d(t_k, 0) - 1),
/// with K_d the kernel restricted to the first d coordinates (or, with
/// order_weighted, the same sum with every subset weighted by max(|u|, 1)).
/// Component d+1 minimises E^2_{d+1} over candidates coprime to n; values within
/// a relative 1e-12 of the best count as ties and the smallest candidate wins.
class CbcBuilder {
 public:
  static constexpr double kTieTolerance = 1e-12;

  CbcBuilder(std::uint32_t n, SmoothnessOrder alpha, const WeightScheme& scheme,
             const CbcOptions& options = {});

  std::uint32_t n() const noexcept { return n_; }
  std::size_t dimension() const noexcept { return chosen_.size(); }
  std::span<const std::uint32_t> candidates() const noexcept { return candidates_; }

  /// Criterion after appending each candidate as the next component.
  std::vector<double> candidate_criteria() const;

  /// Select and append the next component; returns it.
  std::uint32_t extend();

  /// Criterion of the current prefix (0 before any component is chosen).
  double criterion() const noexcept { return criterion_; }

  GeneratingVector vector() const { return GeneratingVector(n_, chosen_); }

 private:
  // Criterion(z) = (base_ + sum_r slope_[r] * omega_[(r z) mod n]) / n
  void prepare_next();
  void center_slope();
  void apply(std::uint32_t z);

  std::uint32_t n_;
  int alpha_;
  std::size_t s_max_;
  bool product_form_;
  bool order_weighted_;
  std::vector<double> gamma_;  // product-form factors
  std::shared_ptr<const detail::OrderDependentFactors> order_;

  std::vector<std::uint32_t> candidates_;
  std::vector<double> omega_;  // eta_alpha(r / n)

  std::vector<double> prod_minus_one_;  // product form: K_d(t_r, 0) - 1
  std::vector<double> order_sum_;       // order-weighted accumulator
  std::vector<double> orders_;          // order-dependent: n rows of Gamma_l P_l

  double base_ = 0.0;
  double omega_total_ = 0.0;
  std::vector<double> slope_;
  std::vector<std::uint32_t> chosen_;
  double criterion_ = 0.0;
};

/// Runs CbcBuilder for s components.
GeneratingVector cbc_construct(std::uint32_t n, std::size_t s, SmoothnessOrder alpha,
                               const WeightScheme& scheme, const CbcOptions& options = {});

/// Cache format: line 1 "n s", line 2 "z_1 ... z_s", newline-terminated.
void save_vector(const GeneratingVector& gv, const std::filesystem::path& path);
GeneratingVector load_vector(const std::filesystem::path& path);

}  // namespace lki
