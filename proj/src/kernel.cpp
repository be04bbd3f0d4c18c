#include "lki/kernel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "lki/errors.hpp"
#include "lki/simd/kernels.hpp"
#include "order_dp.hpp"

namespace lki {
namespace {

std::atomic<std::uint64_t> g_column_transforms{0};

void check_dimension(const KernelSpec& spec, std::size_t got, const char* what) {
  if (got != spec.s()) {
    throw ConfigError(std::string(what) + " has dimension " + std::to_string(got) +
                      ", kernel expects " + std::to_string(spec.s()));
  }
}

// Coordinate j of every lattice node in residue order.
void lattice_coordinates(const GeneratingVector& gv, std::size_t j, std::vector<double>& out) {
  const std::uint32_t n = gv.n();
  const std::uint32_t z = gv.z()[j];
  const double inv = 1.0 / static_cast<double>(n);
  out.resize(n);
  std::uint32_t pos = 0;
  for (std::uint32_t r = 0; r < n; ++r) {
    out[r] = static_cast<double>(pos) * inv;
    pos += z;
    if (pos >= n) pos -= n;
  }
}

void check_finite(double v) {
  if (!std::isfinite(v)) throw DomainError("kernel value overflows double precision");
}

}  // namespace

KernelSpec::KernelSpec(SmoothnessOrder alpha, WeightScheme scheme, std::size_t s)
    : alpha_(alpha), scheme_(std::move(scheme)), s_(s) {
  validate(scheme_);
  if (scheme_dimension(scheme_) < s_) {
    throw ConfigError("weight scheme covers " + std::to_string(scheme_dimension(scheme_)) +
                      " dimensions, kernel needs " + std::to_string(s_));
  }
  if (const auto* spod = std::get_if<SpodWeights>(&scheme_); spod && spod->alpha != alpha.value()) {
    throw ConfigError("SPOD weights built for a different smoothness order");
  }
}

double kernel_eval(const KernelSpec& spec, std::span<const double> y, std::span<const double> y2) {
  check_dimension(spec, y.size(), "first point");
  check_dimension(spec, y2.size(), "second point");
  const SmoothnessOrder alpha = spec.alpha();
  if (is_product_form(spec.scheme())) {
    const auto gamma = product_factors(spec.scheme());
    double prod = 1.0;
    for (std::size_t j = 0; j < spec.s(); ++j) {
      prod *= 1.0 + gamma[j] * specfun::eta(alpha, y[j], y2[j]);
    }
    return prod;
  }
  const detail::OrderDependentFactors factors(spec.scheme());
  std::vector<double> row(spec.s() * factors.nu_max() + 1, 0.0);
  row[0] = 1.0;
  std::size_t top = 0;
  for (std::size_t j = 0; j < spec.s(); ++j) {
    top = factors.fold(j, specfun::eta(alpha, y[j], y2[j]), row.data(), top);
  }
  double k = 0.0;
  for (std::size_t l = 0; l <= top; ++l) k += row[l];
  check_finite(k);
  return k;
}

namespace {

// K(t_r, y) - 1 in residue order. Kept separate from the constant so that the
// DFT of a kernel vector does not lose its high frequencies to cancellation.
std::vector<double> lattice_excess(const KernelSpec& spec, const GeneratingVector& gv,
                                   std::span<const double> y) {
  check_dimension(spec, gv.s(), "generating vector");
  check_dimension(spec, y.size(), "point");
  const std::uint32_t n = gv.n();
  const int alpha = spec.alpha().value();
  std::vector<double> coords;
  std::vector<double> eta(n);
  std::vector<double> values(n, 0.0);

  if (is_product_form(spec.scheme())) {
    const auto gamma = product_factors(spec.scheme());
    for (std::size_t j = 0; j < spec.s(); ++j) {
      lattice_coordinates(gv, j, coords);
      simd::product_excess_update(alpha, gamma[j], coords, y[j], values);
    }
    for (double v : values) check_finite(v);
    return values;
  }

  const detail::OrderDependentFactors factors(spec.scheme());
  const std::size_t width = spec.s() * factors.nu_max() + 1;
  std::vector<double> rows(static_cast<std::size_t>(n) * width, 0.0);
  for (std::uint32_t r = 0; r < n; ++r) rows[r * width] = 1.0;
  std::size_t top = 0;
  for (std::size_t j = 0; j < spec.s(); ++j) {
    lattice_coordinates(gv, j, coords);
    simd::eta_batch(alpha, coords, y[j], eta);
    std::size_t new_top = top;
    for (std::uint32_t r = 0; r < n; ++r) new_top = factors.fold(j, eta[r], &rows[r * width], top);
    top = new_top;
  }
  for (std::uint32_t r = 0; r < n; ++r) {
    double k = 0.0;
    for (std::size_t l = 1; l <= top; ++l) k += rows[r * width + l];
    check_finite(k);
    values[r] = k;
  }
  return values;
}

// DFT of K(t_r, y) for r = 0..n-1. Returns ||K(t_., y) - 1||_2.
double kernel_spectrum(const KernelSpec& spec, const GeneratingVector& gv, std::span<const double> y,
                       const fft::RealDft& dft, std::span<std::complex<double>> out) {
  const std::vector<double> excess = lattice_excess(spec, gv, y);
  dft.forward(excess, out);
  out[0] += static_cast<double>(gv.n());
  return std::sqrt(simd::dot(excess, excess));
}

}  // namespace

std::vector<double> kernel_lattice_values(const KernelSpec& spec, const GeneratingVector& gv,
                                          std::span<const double> y) {
  std::vector<double> values = lattice_excess(spec, gv, y);
  for (double& v : values) v += 1.0;
  return values;
}

std::vector<double> kernel_first_column(const KernelSpec& spec, const GeneratingVector& gv) {
  const std::vector<double> origin(spec.s(), 0.0);
  std::vector<double> v = kernel_lattice_values(spec, gv, origin);
  // Residue r <-> node k = r for r >= 1, node n <-> residue 0.
  std::rotate(v.begin(), v.begin() + 1, v.end());
  return v;
}

std::uint64_t column_transform_count() noexcept { return g_column_transforms.load(); }

CirculantSystem::CirculantSystem(const KernelSpec& spec, const GeneratingVector& gv)
    : dft_(gv.n()) {
  // In node order K_{k,k'} = K(t_{k-k'}, 0), so the residue-ordered lattice
  // values at the origin generate the circulant directly.
  const std::vector<double> origin(spec.s(), 0.0);
  std::vector<std::complex<double>> spectrum(dft_.spectrum_size());
  const double excess_norm = kernel_spectrum(spec, gv, origin, dft_, spectrum);
  g_column_transforms.fetch_add(1);
  noise_floor_ = kNoiseFactor * std::numeric_limits<double>::epsilon() *
                 (std::log2(static_cast<double>(gv.n())) + 1.0) * excess_norm;

  eigenvalues_.resize(spectrum.size());
  double lo = INFINITY;
  double hi = 0.0;
  std::size_t worst = 0;
  for (std::size_t h = 0; h < spectrum.size(); ++h) {
    const double ev = spectrum[h].real();
    eigenvalues_[h] = ev;
    if (ev < lo) {
      lo = ev;
      worst = h;
    }
    hi = std::max(hi, std::abs(ev));
  }
  condition_ratio_ = lo / hi;
  if (!(lo > 0.0)) {
    throw IllConditionedError("kernel matrix eigenvalue " + std::to_string(lo) + " at frequency " +
                                  std::to_string(worst) + " is not positive",
                              worst, condition_ratio_);
  }
  if (!(lo > noise_floor_)) {
    std::ostringstream msg;
    msg << "kernel matrix ill-conditioned: eigenvalue " << lo << " at frequency " << worst
        << " is below the rounding level " << noise_floor_ << " (min/max ratio " << condition_ratio_
        << ")";
    throw IllConditionedError(msg.str(), worst, condition_ratio_);
  }
}

std::vector<std::complex<double>> CirculantSystem::solve_spectrum(std::span<const double> f) const {
  if (f.size() != n()) throw ConfigError("right-hand side length does not match lattice size");
  std::vector<std::complex<double>> spec(dft_.spectrum_size());
  dft_.forward(f, spec);
  for (std::size_t h = 0; h < spec.size(); ++h) spec[h] /= eigenvalues_[h];
  return spec;
}

std::vector<double> CirculantSystem::solve(std::span<const double> f) const {
  const auto spec = solve_spectrum(f);
  std::vector<double> a(n());
  dft_.inverse(spec, a);
  return a;
}

std::vector<double> CirculantSystem::apply_spectrum(
    std::span<const std::complex<double>> a_hat) const {
  std::vector<std::complex<double>> prod(a_hat.begin(), a_hat.end());
  for (std::size_t h = 0; h < prod.size(); ++h) prod[h] *= eigenvalues_[h];
  std::vector<double> out(n());
  dft_.inverse(prod, out);
  return out;
}

namespace {

void check_residual(const CirculantSystem& system, std::span<const std::complex<double>> a_hat,
                    std::span<const double> f, std::size_t stride, std::size_t offset) {
  const std::vector<double> back = system.apply_spectrum(a_hat);
  double fmax = 0.0;
  double rmax = 0.0;
  for (std::size_t k = 0; k < back.size(); ++k) {
    const double fk = f[k * stride + offset];
    fmax = std::max(fmax, std::abs(fk));
    rmax = std::max(rmax, std::abs(back[k] - fk));
  }
  if (!(rmax <= kResidualTolerance * (1.0 + fmax))) {
    throw SolverError("interpolation residual " + std::to_string(rmax) + " exceeds tolerance",
                      rmax);
  }
}

}  // namespace

Interpolant::Interpolant(KernelSpec spec, GeneratingVector gv, std::vector<double> coeffs)
    : spec_(std::move(spec)), gv_(std::move(gv)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != gv_.n()) throw ConfigError("coefficient count does not match lattice size");
  check_dimension(spec_, gv_.s(), "generating vector");
}

double Interpolant::evaluate(std::span<const double> y) const {
  const std::vector<double> v = kernel_lattice_values(spec_, gv_, y);
  const std::size_t n = v.size();
  // a[k-1] pairs with residue k mod n.
  double acc = simd::dot(std::span(coeffs_).first(n - 1), std::span(v).subspan(1));
  return acc + coeffs_[n - 1] * v[0];
}

std::vector<double> Interpolant::evaluate_shifted(std::span<const double> y) const {
  const fft::RealDft dft(gv_.n());
  std::vector<std::complex<double>> v_hat(dft.spectrum_size());
  std::vector<std::complex<double>> a_hat(dft.spectrum_size());
  kernel_spectrum(spec_, gv_, y, dft, v_hat);
  dft.forward(coeffs_, a_hat);
  for (std::size_t h = 0; h < a_hat.size(); ++h) a_hat[h] *= std::conj(v_hat[h]);
  std::vector<double> out(gv_.n());
  dft.inverse(a_hat, out);
  return out;
}

Interpolant fit(const KernelSpec& spec, const GeneratingVector& gv, std::span<const double> f_values) {
  const CirculantSystem system(spec, gv);
  const auto a_hat = system.solve_spectrum(f_values);
  check_residual(system, a_hat, f_values, 1, 0);
  std::vector<double> a(gv.n());
  system.dft().inverse(a_hat, a);
  return Interpolant(spec, gv, std::move(a));
}

VectorInterpolant::VectorInterpolant(const KernelSpec& spec, const GeneratingVector& gv,
                                     std::span<const double> values, std::size_t components)
    : spec_(spec),
      gv_(gv),
      system_(std::make_shared<const CirculantSystem>(spec, gv)),
      components_(components) {
  const std::size_t n = gv.n();
  if (values.size() != n * components) throw ConfigError("value matrix is not n x components");
  const std::size_t m = system_->dft().spectrum_size();
  coeff_spectra_.resize(components * m);
  std::vector<double> column(n);
  for (std::size_t c = 0; c < components; ++c) {
    for (std::size_t k = 0; k < n; ++k) column[k] = values[k * components + c];
    auto a_hat = system_->solve_spectrum(column);
    check_residual(*system_, a_hat, values, components, c);
    std::copy(a_hat.begin(), a_hat.end(), coeff_spectra_.begin() + c * m);
  }
}

std::vector<double> VectorInterpolant::coefficients(std::size_t component) const {
  if (component >= components_) throw IndexError("component out of range");
  const std::size_t m = system_->dft().spectrum_size();
  std::vector<double> a(system_->n());
  system_->dft().inverse(std::span(coeff_spectra_).subspan(component * m, m), a);
  return a;
}

std::vector<double> VectorInterpolant::evaluate_shifted(std::span<const double> y) const {
  const std::size_t n = system_->n();
  const std::size_t m = system_->dft().spectrum_size();
  std::vector<std::complex<double>> v_hat(m);
  kernel_spectrum(spec_, gv_, y, system_->dft(), v_hat);
  for (auto& x : v_hat) x = std::conj(x);

  std::vector<double> out(n * components_);
#pragma omp parallel
  {
    std::vector<std::complex<double>> prod(m);
    std::vector<double> column(n);
#pragma omp for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(components_); ++c) {
      const auto* a_hat = &coeff_spectra_[c * m];
      for (std::size_t h = 0; h < m; ++h) prod[h] = a_hat[h] * v_hat[h];
      system_->dft().inverse(prod, column);
      for (std::size_t k = 0; k < n; ++k) out[k * components_ + c] = column[k];
    }
  }
  return out;
}

}  // namespace lki
