// Compiled with -mavx2 -mfma. Only reached through avx2_table() after a
// runtime CPU check.

#include <immintrin.h>

#include <cmath>

#include "lki/simd/eta_poly.hpp"
#include "lki/simd/kernels.hpp"

namespace lki::simd {
namespace {

inline __m256d wrap(__m256d t) noexcept {
  t = _mm256_sub_pd(t, _mm256_floor_pd(t));
  const __m256d one = _mm256_set1_pd(1.0);
  return _mm256_andnot_pd(_mm256_cmp_pd(t, one, _CMP_GE_OQ), t);
}

inline double wrap1(double t) noexcept {
  t -= std::floor(t);
  return t >= 1.0 ? 0.0 : t;
}

template <std::size_t N>
inline __m256d horner(const std::array<double, N>& c, __m256d t) noexcept {
  __m256d acc = _mm256_set1_pd(c[0]);
  for (std::size_t i = 1; i < N; ++i) acc = _mm256_fmadd_pd(acc, t, _mm256_set1_pd(c[i]));
  return acc;
}

template <int Alpha>
inline __m256d eta_at(__m256d t) noexcept {
  if constexpr (Alpha == 1) {
    return _mm256_mul_pd(_mm256_set1_pd(detail::kEtaScale1), horner(detail::kBernoulli2, t));
  } else if constexpr (Alpha == 2) {
    return _mm256_mul_pd(_mm256_set1_pd(detail::kEtaScale2), horner(detail::kBernoulli4, t));
  } else {
    return _mm256_mul_pd(_mm256_set1_pd(detail::kEtaScale3), horner(detail::kBernoulli6, t));
  }
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
  const __m256d s = _mm256_set1_pd(shift);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = wrap(_mm256_sub_pd(_mm256_loadu_pd(x + i), s));
    _mm256_storeu_pd(out + i, eta_at<Alpha>(t));
  }
  for (; i < n; ++i) out[i] = eta_at<Alpha>(wrap1(x[i] - shift));
}

template <int Alpha>
void excess_update_impl(double gamma, const double* x, double shift, double* excess,
                        std::size_t n) {
  const __m256d s = _mm256_set1_pd(shift);
  const __m256d g = _mm256_set1_pd(gamma);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = wrap(_mm256_sub_pd(_mm256_loadu_pd(x + i), s));
    __m256d e = _mm256_loadu_pd(excess + i);
    __m256d term = _mm256_mul_pd(g, eta_at<Alpha>(t));
    _mm256_storeu_pd(excess + i, _mm256_fmadd_pd(term, _mm256_add_pd(one, e), e));
  }
  for (; i < n; ++i) {
    const double term = gamma * eta_at<Alpha>(wrap1(x[i] - shift));
    excess[i] += term * (1.0 + excess[i]);
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

inline double hsum(__m256d v) noexcept {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double gather_dot(const double* w, const double* table, const std::uint32_t* idx,
                  std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m128i i0 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
    __m128i i1 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i + 4));
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_i32gather_pd(table, i0, 8), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i + 4), _mm256_i32gather_pd(table, i1, 8), acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += w[i] * table[idx[i]];
  return acc;
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

const KernelTable& avx2_table_unchecked() noexcept {
  static const KernelTable table{Isa::avx2, eta_batch, product_excess_update, gather_dot, dot, axpy};
  return table;
}

}  // namespace lki::simd
