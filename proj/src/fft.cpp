#include "lki/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <vector>

#include "lki/errors.hpp"

namespace lki::fft {
namespace {
// FFTW's planner is not re-entrant; execution with new-array functions is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct RealDft::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

RealDft::RealDft(std::size_t n) : n_(n), plans_(std::make_unique<Plans>()) {
  if (n == 0) throw ConfigError("DFT length must be positive");
  std::vector<double> real(n);
  std::vector<fftw_complex> spec(n / 2 + 1);
  const int len = static_cast<int>(n);
  std::lock_guard lock(planner_mutex());
  plans_->r2c = fftw_plan_dft_r2c_1d(len, real.data(), spec.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans_->c2r = fftw_plan_dft_c2r_1d(len, spec.data(), real.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (plans_->r2c == nullptr || plans_->c2r == nullptr) throw Error("FFTW planning failed");
}

RealDft::~RealDft() {
  if (!plans_) return;
  std::lock_guard lock(planner_mutex());
  if (plans_->r2c) fftw_destroy_plan(plans_->r2c);
  if (plans_->c2r) fftw_destroy_plan(plans_->c2r);
}

RealDft::RealDft(RealDft&&) noexcept = default;
RealDft& RealDft::operator=(RealDft&&) noexcept = default;

void RealDft::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
  if (in.size() != n_ || out.size() != spectrum_size()) throw ConfigError("DFT size mismatch");
  // r2c leaves its input intact, but FFTW's signature is non-const.
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void RealDft::inverse(std::span<const std::complex<double>> in, std::span<double> out) const {
  if (in.size() != spectrum_size() || out.size() != n_) throw ConfigError("DFT size mismatch");
  // c2r overwrites its input.
  std::vector<std::complex<double>> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
  const double scale = 1.0 / static_cast<double>(n_);
  for (double& v : out) v *= scale;
}

}  // namespace lki::fft
