#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference
// implementation; a vectorised variant is picked once at startup when the
// CPU supports it. Set LKI_SIMD=scalar in the environment to force the
// reference path.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace lki::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
  Isa isa;
  // out[i] = eta_alpha(frac(x[i] - shift))
  void (*eta_batch)(int alpha, const double* x, double shift, double* out, std::size_t n);
  // e[i] += gamma * eta_alpha(frac(x[i] - shift)) * (1 + e[i]), i.e. (1 + e) *= 1 + gamma * eta
  void (*product_excess_update)(int alpha, double gamma, const double* x, double shift,
                                double* excess, std::size_t n);
  // sum_i w[i] * table[idx[i]]
  double (*gather_dot)(const double* w, const double* table, const std::uint32_t* idx,
                       std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

/// Vectorised table, or nullptr when not compiled in or not supported by this CPU.
const KernelTable* avx2_table() noexcept;

/// Table selected for this process.
const KernelTable& active() noexcept;

// Span front-ends over the active table.

void eta_batch(int alpha, std::span<const double> x, double shift, std::span<double> out);
void product_excess_update(int alpha, double gamma, std::span<const double> x, double shift,
                           std::span<double> excess);
double gather_dot(std::span<const double> w, std::span<const double> table,
                  std::span<const std::uint32_t> idx);
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);

}  // namespace lki::simd
