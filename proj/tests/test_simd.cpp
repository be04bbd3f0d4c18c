#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "lki/simd/kernels.hpp"
#include "lki/specfun.hpp"

using namespace lki;

namespace {

std::vector<double> uniform(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_SUITE("simd") {
  TEST_CASE("scalar eta batch matches specfun") {
    std::mt19937_64 rng(1);
    const auto x = uniform(rng, 37, 0.0, 1.0);
    std::vector<double> out(x.size());
    for (int a = 1; a <= 3; ++a) {
      simd::scalar_table().eta_batch(a, x.data(), 0.3, out.data(), x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(out[i] == doctest::Approx(specfun::eta(SmoothnessOrder(a), x[i], 0.3)).epsilon(1e-13));
      }
      std::vector<double> e(x.size(), 0.25);
      simd::scalar_table().product_excess_update(a, 0.4, x.data(), 0.3, e.data(), x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double expected = 1.25 * (1.0 + 0.4 * specfun::eta(SmoothnessOrder(a), x[i], 0.3)) - 1.0;
        CHECK(e[i] == doctest::Approx(expected).epsilon(1e-13));
      }
    }
  }

  TEST_CASE("vectorised kernels agree with the scalar reference") {
    const simd::KernelTable* vec = simd::avx2_table();
    if (vec == nullptr) {
      MESSAGE("no vectorised kernels on this CPU; skipping");
      return;
    }
    const auto& ref = simd::scalar_table();
    std::mt19937_64 rng(7);
    // Lengths around the vector width exercise the tails.
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 16u, 31u, 1000u}) {
      const auto x = uniform(rng, n, 0.0, 1.0);
      const auto w = uniform(rng, n, -1.0, 1.0);
      for (int a = 1; a <= 3; ++a) {
        for (double shift : {0.0, 0.25, 0.9}) {
          std::vector<double> r(n), v(n);
          ref.eta_batch(a, x.data(), shift, r.data(), n);
          vec->eta_batch(a, x.data(), shift, v.data(), n);
          for (std::size_t i = 0; i < n; ++i) CHECK(v[i] == doctest::Approx(r[i]).epsilon(1e-13));

          std::vector<double> pr(n, 0.5), pv(n, 0.5);
          ref.product_excess_update(a, 0.37, x.data(), shift, pr.data(), n);
          vec->product_excess_update(a, 0.37, x.data(), shift, pv.data(), n);
          for (std::size_t i = 0; i < n; ++i) CHECK(pv[i] == doctest::Approx(pr[i]).epsilon(1e-13));
        }
      }
      const auto table = uniform(rng, 64, -2.0, 2.0);
      std::vector<std::uint32_t> idx(n);
      for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<std::uint32_t>((i * 29 + 3) % 64);
      const double gr = ref.gather_dot(w.data(), table.data(), idx.data(), n);
      const double gv = vec->gather_dot(w.data(), table.data(), idx.data(), n);
      CHECK(std::abs(gr - gv) <= 1e-13 * (1.0 + std::abs(gr)) * std::sqrt(double(n) + 1.0));

      const double dr = ref.dot(x.data(), w.data(), n);
      const double dv = vec->dot(x.data(), w.data(), n);
      CHECK(std::abs(dr - dv) <= 1e-13 * (1.0 + std::abs(dr)) * std::sqrt(double(n) + 1.0));

      std::vector<double> yr = w, yv = w;
      ref.axpy(-0.7, x.data(), yr.data(), n);
      vec->axpy(-0.7, x.data(), yv.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(yv[i] == doctest::Approx(yr[i]).epsilon(1e-15));
    }
  }

  TEST_CASE("active table is one of the two") {
    const auto& t = simd::active();
    CHECK((t.isa == simd::Isa::scalar || t.isa == simd::Isa::avx2));
    CHECK(simd::isa_name(simd::Isa::scalar) == "scalar");
  }
}
