#include <cstdlib>
#include <string_view>

#include "lki/simd/kernels.hpp"

namespace lki::simd {

#ifdef LKI_HAVE_AVX2
const KernelTable& avx2_table_unchecked() noexcept;
#endif

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::avx2:
      return "avx2";
    default:
      return "scalar";
  }
}

const KernelTable* avx2_table() noexcept {
#ifdef LKI_HAVE_AVX2
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? &avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept {
  static const KernelTable& table = []() -> const KernelTable& {
    const char* force = std::getenv("LKI_SIMD");
    if (force != nullptr && std::string_view(force) == "scalar") return scalar_table();
    if (const KernelTable* t = avx2_table()) return *t;
    return scalar_table();
  }();
  return table;
}

void eta_batch(int alpha, std::span<const double> x, double shift, std::span<double> out) {
  active().eta_batch(alpha, x.data(), shift, out.data(), x.size());
}

void product_excess_update(int alpha, double gamma, std::span<const double> x, double shift,
                           std::span<double> excess) {
  active().product_excess_update(alpha, gamma, x.data(), shift, excess.data(), x.size());
}

double gather_dot(std::span<const double> w, std::span<const double> table,
                  std::span<const std::uint32_t> idx) {
  return active().gather_dot(w.data(), table.data(), idx.data(), w.size());
}

double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}

}  // namespace lki::simd
