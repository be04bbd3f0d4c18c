#include <cmath>

#include "lki/simd/eta_poly.hpp"
#include "lki/simd/kernels.hpp"

namespace lki::simd {
namespace {

inline double wrap(double t) noexcept {
  t -= std::floor(t);
  return t >= 1.0 ? 0.0 : t;
}

template <int Alpha>
inline double eta_at(double t) noexcept {
  if constexpr (Alpha == 1) {
    return detail::kEtaScale1 * detail::horner(detail::kBernoulli2, t);
  } else if constexpr (Alpha == 2) {
    return detail::kEtaScale2 * detail::horner(detail::kBernoulli4, t);
  } else {
    return detail::kEtaScale3 * detail::horner(detail::kBernoulli6, t);
  }
}

template <int Alpha>
void eta_batch_impl(const double* x, double shift, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = eta_at<Alpha>(wrap(x[i] - shift));
}

template <int Alpha>
void excess_update_impl(double gamma, const double* x, double shift, double* excess,
                        std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double g = gamma * eta_at<Alpha>(wrap(x[i] - shift));
    excess[i] += g * (1.0 + excess[i]);
  }
}

void eta_batch(int alpha, const double* x, double shift, double* out, std::size_t n) {
  switch (alpha) {
    case 1: return eta_batch_impl<1>(x, shift, out, n);
    case 2: return eta_batch_impl<2>(x, shift, out, n);
    default: return eta_batch_impl<3>(x, shift, out, n);
  }
}

void product_excess_update(int alpha, double gamma, const double* x, double shift, double* excess,
                           std::size_t n) {
  switch (alpha) {
    case 1: return excess_update_impl<1>(gamma, x, shift, excess, n);
    case 2: return excess_update_impl<2>(gamma, x, shift, excess, n);
    default: return excess_update_impl<3>(gamma, x, shift, excess, n);
  }
}

double gather_dot(const double* w, const double* table, const std::uint32_t* idx,
                  std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * table[idx[i]];
  return acc;
}

double dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

const KernelTable& scalar_table() noexcept {
  static const KernelTable table{Isa::scalar, eta_batch, product_excess_update, gather_dot, dot,
                                 axpy};
  return table;
}

}  // namespace lki::simd
