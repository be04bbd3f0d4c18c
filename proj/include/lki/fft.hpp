#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace lki::fft {

/// Real-input DFT of fixed length n, X_h = sum_m x_m e^{-2 pi i h m / n},
/// h = 0..n/2. Plans are built once; transforms are safe to call concurrently.
class RealDft {
 public:
  explicit RealDft(std::size_t n);
  ~RealDft();
  RealDft(RealDft&&) noexcept;
  RealDft& operator=(RealDft&&) noexcept;
  RealDft(const RealDft&) = delete;
  RealDft& operator=(const RealDft&) = delete;

  std::size_t size() const noexcept { return n_; }
  std::size_t spectrum_size() const noexcept { return n_ / 2 + 1; }

  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;

  /// Inverse transform including the 1/n factor; spectrum is taken as Hermitian.
  void inverse(std::span<const std::complex<double>> in, std::span<double> out) const;

 private:
  struct Plans;
  std::size_t n_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace lki::fft
