#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "lki/errors.hpp"
#include "lki/kernel.hpp"
#include "lki/lattice.hpp"
#include "lki/oracles.hpp"
#include "lki/weights.hpp"

using namespace lki;
using doctest::Approx;

namespace {

KernelSpec easy_spec(std::size_t s) {
  const auto d = derive_params({3.6, 0.2 / std::sqrt(6.0), 1.0 / 3.3, s});
  return KernelSpec(d.alpha, serendipitous_weights(d), s);
}

KernelSpec hard_spod_spec(std::size_t s) {
  const auto d = derive_params({2.4, 1.5 / std::sqrt(6.0), 1.0 / 2.2, s});
  return KernelSpec(d.alpha, spod_weights(d), s);
}

std::vector<double> random_point(std::mt19937_64& rng, std::size_t s) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> y(s);
  for (double& v : y) v = u(rng);
  return y;
}

// f(y) = prod_j (1 + sin(2 pi y_j) / (j + 1)), evaluated at lattice nodes in node order.
std::vector<double> sample(const GeneratingVector& gv) {
  std::vector<double> f(gv.n());
  for (std::size_t k = 1; k <= gv.n(); ++k) {
    const auto t = node(gv, k);
    double v = 1.0;
    for (std::size_t j = 0; j < t.size(); ++j) v *= 1.0 + std::sin(2.0 * M_PI * t[j]) / double(j + 2);
    f[k - 1] = v;
  }
  return f;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_SUITE("kernel") {
  TEST_CASE("kernel definition validation") {
    const auto d = derive_params({2.4, 1.5 / std::sqrt(6.0), 1.0 / 2.2, 3});
    CHECK_THROWS_AS(KernelSpec(d.alpha, spod_weights(d), 4), ConfigError);
    CHECK_THROWS_AS(KernelSpec(SmoothnessOrder(1), spod_weights(d), 3), ConfigError);
    const auto spec = hard_spod_spec(3);
    CHECK_THROWS_AS(kernel_eval(spec, std::vector<double>{0.1, 0.2}, std::vector<double>{0.1, 0.2, 0.3}),
                    ConfigError);
  }

  TEST_CASE("symmetry and shift invariance") {
    std::mt19937_64 rng(11);
    for (const auto& spec : {easy_spec(6), hard_spod_spec(6)}) {
      for (int i = 0; i < 20; ++i) {
        const auto y = random_point(rng, 6);
        const auto y2 = random_point(rng, 6);
        const auto shift = random_point(rng, 6);
        auto ys = y, y2s = y2;
        for (std::size_t j = 0; j < 6; ++j) {
          ys[j] += shift[j];
          y2s[j] += shift[j];
        }
        const double k = kernel_eval(spec, y, y2);
        CHECK(k == Approx(kernel_eval(spec, y2, y)).epsilon(1e-13));
        CHECK(k == Approx(kernel_eval(spec, ys, y2s)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("fast kernel matches subset enumeration") {
    std::mt19937_64 rng(5);
    for (std::size_t s = 1; s <= 3; ++s) {
      for (int alpha = 1; alpha <= 2; ++alpha) {
        const double p = alpha == 1 ? 1.0 / 1.2 : 1.0 / 2.2;
        const auto d = derive_params({2.4, 1.5 / std::sqrt(6.0), p, s});
        REQUIRE(d.alpha.value() == alpha);
        const KernelSpec spec(d.alpha, spod_weights(d), s);
        const KernelSpec ser(d.alpha, serendipitous_weights(d), s);
        for (int i = 0; i < 10; ++i) {
          const auto y = random_point(rng, s);
          const auto y2 = random_point(rng, s);
          CHECK(kernel_eval(spec, y, y2) == Approx(oracle::kernel_by_subsets(spec, y, y2)).epsilon(1e-12));
          CHECK(kernel_eval(ser, y, y2) == Approx(oracle::kernel_by_subsets(ser, y, y2)).epsilon(1e-12));
        }
      }
    }
  }

  TEST_CASE("lattice values and first column") {
    std::mt19937_64 rng(9);
    const GeneratingVector gv(32, {1, 13, 7, 29});
    for (const auto& spec : {easy_spec(4), hard_spod_spec(4)}) {
      const auto y = random_point(rng, 4);
      const auto v = kernel_lattice_values(spec, gv, y);
      REQUIRE(v.size() == 32);
      for (std::uint32_t r = 0; r < 32; ++r) {
        const auto t = r == 0 ? node(gv, 32) : node(gv, r);
        CHECK(v[r] == Approx(kernel_eval(spec, t, y)).epsilon(1e-12));
      }
      const auto c = kernel_first_column(spec, gv);
      const std::vector<double> origin(4, 0.0);
      for (std::size_t k = 1; k <= 32; ++k) {
        CHECK(c[k - 1] == Approx(kernel_eval(spec, node(gv, k), origin)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("circulant solve matches a dense symmetric solve") {
    for (std::uint32_t n : {8u, 16u, 64u}) {
      for (std::size_t s : {2u, 10u}) {
        const WeightScheme w = serendipitous_weights(derive_params({2.4, 1.5 / std::sqrt(6.0), 1.0 / 2.2, s}));
        const KernelSpec spec(SmoothnessOrder(2), w, s);
        const auto gv = cbc_construct(n, s, spec.alpha(), w);
        const auto f = sample(gv);
        const CirculantSystem sys(spec, gv);
        const auto fast = sys.solve(f);
        const auto dense = oracle::dense_solve(spec, gv, f);
        CHECK(max_abs_diff(fast, dense) <= 1e-10 * max_abs(dense));
        for (double e : sys.eigenvalues()) CHECK(e > 0.0);
        CHECK(sys.condition_ratio() * sys.eigenvalues()[0] > sys.noise_floor());
      }
    }
  }

  TEST_CASE("interpolation property and evaluation") {
    const auto spec = hard_spod_spec(5);
    const auto gv = cbc_construct(64, 5, spec.alpha(), spec.scheme());
    const auto f = sample(gv);
    const auto interp = fit(spec, gv, f);
    for (std::size_t k = 1; k <= 64; ++k) {
      CHECK(interp.evaluate(node(gv, k)) == Approx(f[k - 1]).epsilon(1e-9));
    }
    // evaluate against the defining sum
    std::mt19937_64 rng(21);
    const auto y = random_point(rng, 5);
    double naive = 0.0;
    for (std::size_t k = 1; k <= 64; ++k) naive += interp.coeffs()[k - 1] * kernel_eval(spec, node(gv, k), y);
    CHECK(interp.evaluate(y) == Approx(naive).epsilon(1e-11));

    const auto shifted = interp.evaluate_shifted(y);
    for (std::size_t k = 1; k <= 64; ++k) {
      auto p = node(gv, k);
      for (std::size_t j = 0; j < 5; ++j) p[j] += y[j];
      CHECK(shifted[k - 1] == Approx(interp.evaluate(p)).epsilon(1e-10));
    }
  }

  TEST_CASE("vector interpolant shares one column transform") {
    const auto spec = easy_spec(4);
    const auto gv = cbc_construct(32, 4, spec.alpha(), spec.scheme());
    const std::size_t comps = 3;
    std::vector<double> values(32 * comps);
    const auto f = sample(gv);
    for (std::size_t k = 0; k < 32; ++k) {
      for (std::size_t c = 0; c < comps; ++c) values[k * comps + c] = f[k] * double(c + 1) + double(c);
    }
    const auto before = column_transform_count();
    const VectorInterpolant vi(spec, gv, values, comps);
    CHECK(column_transform_count() - before == 1);

    std::mt19937_64 rng(2);
    const auto y = random_point(rng, 4);
    const auto out = vi.evaluate_shifted(y);
    CHECK(column_transform_count() - before == 1);
    for (std::size_t c = 0; c < comps; ++c) {
      std::vector<double> fc(32);
      for (std::size_t k = 0; k < 32; ++k) fc[k] = values[k * comps + c];
      const auto single = fit(spec, gv, fc);
      const auto coeffs = vi.coefficients(c);
      for (std::size_t k = 0; k < 32; ++k) CHECK(coeffs[k] == Approx(single.coeffs()[k]).epsilon(1e-10));
      const auto ref = single.evaluate_shifted(y);
      for (std::size_t k = 0; k < 32; ++k) CHECK(out[k * comps + c] == Approx(ref[k]).epsilon(1e-10));
    }
  }

  TEST_CASE("eigenvalues below the rounding level are rejected") {
    // One coordinate, alpha = 3: the eigenvalue at h = n/2 is about 2 n (n/2)^{-6}.
    const KernelSpec spec(SmoothnessOrder(3), ProductWeights{{1.0}}, 1);
    const GeneratingVector gv(4096, {1});
    CHECK_THROWS_AS(CirculantSystem(spec, gv), IllConditionedError);
    try {
      CirculantSystem sys(spec, gv);
    } catch (const IllConditionedError& e) {
      CHECK(e.ratio() < 1e-14);
      CHECK(e.frequency() > 0);
    }
    CHECK_NOTHROW(CirculantSystem(spec, GeneratingVector(64, {1})));
  }

  TEST_CASE("small but resolved eigenvalues are accepted") {
    const auto spec = easy_spec(10);
    const auto gv = cbc_construct(512, 10, spec.alpha(), spec.scheme());
    const CirculantSystem sys(spec, gv);
    CHECK(sys.condition_ratio() < 1e-14);
    const auto f = sample(gv);
    const auto interp = fit(spec, gv, f);
    std::mt19937_64 rng(8);
    const auto y = random_point(rng, 10);
    // the shifted evaluation stays bounded by the data
    double fmax = 0.0;
    for (double v : f) fmax = std::max(fmax, std::abs(v));
    for (double v : interp.evaluate_shifted(y)) CHECK(std::abs(v) <= 2.0 * fmax);
  }
}
