#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "lki/fft.hpp"
#include "lki/lattice.hpp"
#include "lki/specfun.hpp"
#include "lki/weights.hpp"

namespace lki {

/// Reproducing kernel K(y, y') = sum_u gamma_u prod_{j in u} eta_alpha(y_j, y'_j) on [0,1]^s.
class KernelSpec {
 public:
  KernelSpec(SmoothnessOrder alpha, WeightScheme scheme, std::size_t s);

  SmoothnessOrder alpha() const noexcept { return alpha_; }
  const WeightScheme& scheme() const noexcept { return scheme_; }
  std::size_t s() const noexcept { return s_; }

 private:
  SmoothnessOrder alpha_;
  WeightScheme scheme_;
  std::size_t s_;
};

/// O(s) for product-form weights, O(s^2 alpha^2) for POD/SPOD.
double kernel_eval(const KernelSpec& spec, std::span<const double> y, std::span<const double> y2);

/// v[r] = K(t_r, y) for residue r = 0..n-1, with t_0 the origin (= t_n).
std::vector<double> kernel_lattice_values(const KernelSpec& spec, const GeneratingVector& gv,
                                          std::span<const double> y);

/// c[k-1] = K(t_k, 0) for k = 1..n: the first column of the interpolation matrix.
std::vector<double> kernel_first_column(const KernelSpec& spec, const GeneratingVector& gv);

/// Number of kernel-column DFTs computed by this process (one per CirculantSystem).
std::uint64_t column_transform_count() noexcept;

/// The circulant interpolation matrix K_{k,k'} = K(t_k, t_k') in diagonalised form.
///
/// Index conventions: vectors of function values and coefficients are stored in
/// node order, entry k-1 belongs to t_k.
class CirculantSystem {
 public:
  /// Construction fails when the smallest eigenvalue is not resolved above
  /// kNoiseFactor * eps * (log2 n + 1) * ||K(t_., 0) - 1||_2, the rounding level of
  /// the column DFT, or when any eigenvalue is not positive.
  static constexpr double kNoiseFactor = 4.0;

  CirculantSystem(const KernelSpec& spec, const GeneratingVector& gv);

  std::size_t n() const noexcept { return dft_.size(); }
  const fft::RealDft& dft() const noexcept { return dft_; }

  /// Eigenvalues for frequencies h = 0..n/2 (the rest follow by symmetry).
  std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
  /// min / max eigenvalue
  double condition_ratio() const noexcept { return condition_ratio_; }
  /// Eigenvalues at or below this level are indistinguishable from rounding error.
  double noise_floor() const noexcept { return noise_floor_; }

  /// DFT of the coefficient vector solving K a = f.
  std::vector<std::complex<double>> solve_spectrum(std::span<const double> f) const;
  std::vector<double> solve(std::span<const double> f) const;

  /// (K a)_k computed through the DFT.
  std::vector<double> apply_spectrum(std::span<const std::complex<double>> a_hat) const;

 private:
  fft::RealDft dft_;
  std::vector<double> eigenvalues_;
  double condition_ratio_ = 1.0;
  double noise_floor_ = 0.0;
};

/// Interpolants must reproduce data to within this relative tolerance:
/// max_k |f_n(t_k) - f(t_k)| <= kResidualTolerance * (1 + max_k |f(t_k)|).
inline constexpr double kResidualTolerance = 1e-6;

/// f_n(y) = sum_k a_k K(t_k, y).
class Interpolant {
 public:
  Interpolant(KernelSpec spec, GeneratingVector gv, std::vector<double> coeffs);

  const KernelSpec& spec() const noexcept { return spec_; }
  const GeneratingVector& lattice() const noexcept { return gv_; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }

  double evaluate(std::span<const double> y) const;

  /// out[k'-1] = f_n(y + t_k') for k' = 1..n, via one kernel vector and a DFT correlation.
  std::vector<double> evaluate_shifted(std::span<const double> y) const;

 private:
  KernelSpec spec_;
  GeneratingVector gv_;
  std::vector<double> coeffs_;
};

/// Kernel interpolant of f_values (entry k-1 = f(t_k)). Throws IllConditionedError
/// or SolverError when the residual tolerance cannot be met.
Interpolant fit(const KernelSpec& spec, const GeneratingVector& gv, std::span<const double> f_values);

/// Interpolant of a vector-valued function: component c has its own coefficients,
/// all components share one kernel DFT.
class VectorInterpolant {
 public:
  /// values is node-major: values[(k-1) * components + c] = f_c(t_k).
  VectorInterpolant(const KernelSpec& spec, const GeneratingVector& gv,
                    std::span<const double> values, std::size_t components);

  std::size_t components() const noexcept { return components_; }
  const KernelSpec& spec() const noexcept { return spec_; }
  const GeneratingVector& lattice() const noexcept { return gv_; }
  const CirculantSystem& system() const noexcept { return *system_; }

  std::vector<double> coefficients(std::size_t component) const;

  /// Node-major matrix out[(k'-1) * components + c] = f_{n,c}(y + t_k').
  std::vector<double> evaluate_shifted(std::span<const double> y) const;

 private:
  KernelSpec spec_;
  GeneratingVector gv_;
  std::shared_ptr<const CirculantSystem> system_;
  std::size_t components_;
  std::vector<std::complex<double>> coeff_spectra_;  // component-major
};

}  // namespace lki
