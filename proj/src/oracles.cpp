#include "lki/oracles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "lki/errors.hpp"

namespace lki::oracle {

double eta_fourier(int alpha, double y, std::size_t terms) {
  double acc = 0.0;
  // Smallest terms first.
  for (std::size_t h = terms; h >= 1; --h) {
    const double hd = static_cast<double>(h);
    acc += std::cos(2.0 * std::numbers::pi * hd * y) / std::pow(hd, 2.0 * alpha);
  }
  return 2.0 * acc;
}

ZetaBracket zeta_bracket(double x, std::size_t terms) {
  double partial = 0.0;
  for (std::size_t k = terms; k >= 1; --k) partial += std::pow(static_cast<double>(k), -x);
  const double nd = static_cast<double>(terms);
  // int_{N+1}^inf t^-x dt <= sum_{k>N} k^-x <= int_N^inf t^-x dt
  return {partial + std::pow(nd + 1.0, 1.0 - x) / (x - 1.0),
          partial + std::pow(nd, 1.0 - x) / (x - 1.0)};
}

double kernel_by_subsets(const KernelSpec& spec, std::span<const double> y, std::span<const double> y2) {
  const std::size_t s = spec.s();
  if (s > 20) throw ConfigError("subset enumeration limited to s <= 20");
  double total = 0.0;
  std::vector<std::size_t> u;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << s); ++mask) {
    u.clear();
    double prod = 1.0;
    for (std::size_t j = 0; j < s; ++j) {
      if (mask >> j & 1U) {
        u.push_back(j + 1);
        prod *= specfun::eta(spec.alpha(), y[j], y2[j]);
      }
    }
    total += weight_of_subset(spec.scheme(), u) * prod;
  }
  return total;
}

namespace {

using Real = long double;

Real eta_extended(int alpha, Real t) {
  const Real pi = 3.141592653589793238462643383279502884L;
  const Real two_pi_sq = 4.0L * pi * pi;
  switch (alpha) {
    case 1: return two_pi_sq / 2.0L * (t * t - t + 1.0L / 6.0L);
    case 2: return -two_pi_sq * two_pi_sq / 24.0L * (t * t * t * t - 2.0L * t * t * t + t * t - 1.0L / 30.0L);
    default: {
      const Real t2 = t * t;
      const Real b6 = t2 * t2 * t2 - 3.0L * t2 * t2 * t + 2.5L * t2 * t2 - 0.5L * t2 + 1.0L / 42.0L;
      return two_pi_sq * two_pi_sq * two_pi_sq / 720.0L * b6;
    }
  }
}

// K(t, 0) for a lattice offset given by residues r_j / n, in extended precision.
// Order-dependent schemes use K = sum_l Gamma_l P_l with P_l the order-l
// elementary sums, without the ratio recursion of the fast path.
Real kernel_extended(const KernelSpec& spec, std::span<const std::uint64_t> residues, std::uint32_t n) {
  const int alpha = spec.alpha().value();
  const std::size_t s = spec.s();
  std::vector<Real> eta(s);
  for (std::size_t j = 0; j < s; ++j) eta[j] = eta_extended(alpha, static_cast<Real>(residues[j]) / n);

  if (is_product_form(spec.scheme())) {
    const auto gamma = product_factors(spec.scheme());
    Real k = 1.0L;
    for (std::size_t j = 0; j < s; ++j) k *= 1.0L + static_cast<Real>(gamma[j]) * eta[j];
    return k;
  }
  const std::vector<double>* log_order = nullptr;
  std::function<double(std::size_t, int)> factor;
  int nu_max = 1;
  if (const auto* pod = std::get_if<PodWeights>(&spec.scheme())) {
    log_order = &pod->log_order;
    factor = [pod](std::size_t j, int) { return pod->gamma[j]; };
  } else {
    const auto& spod = std::get<SpodWeights>(spec.scheme());
    log_order = &spod.log_order;
    nu_max = spod.alpha;
    factor = [&spod](std::size_t j, int nu) { return spod.factor(j + 1, nu); };
  }
  std::vector<Real> p(s * nu_max + 1, 0.0L);
  p[0] = 1.0L;
  for (std::size_t j = 0; j < s; ++j) {
    for (std::size_t l = (j + 1) * nu_max; l >= 1; --l) {
      Real add = 0.0L;
      for (int nu = 1; nu <= nu_max && static_cast<std::size_t>(nu) <= l; ++nu) {
        add += static_cast<Real>(factor(j, nu)) * p[l - nu];
      }
      p[l] += eta[j] * add;
    }
  }
  Real k = 0.0L;
  for (std::size_t l = 0; l < p.size(); ++l) k += std::exp(static_cast<Real>((*log_order)[l])) * p[l];
  return k;
}

}  // namespace

std::vector<double> dense_solve(const KernelSpec& spec, const GeneratingVector& gv,
                                std::span<const double> f) {
  using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  const std::uint32_t n = gv.n();
  Matrix mat(n, n);
  std::vector<std::uint64_t> residues(gv.s());
  for (std::uint32_t a = 1; a <= n; ++a) {
    for (std::uint32_t b = 1; b <= n; ++b) {
      // t_a - t_b mod 1 = ((a - b) z_j mod n) / n
      for (std::size_t j = 0; j < gv.s(); ++j) {
        const std::uint64_t za = (static_cast<std::uint64_t>(a) * gv.z()[j]) % n;
        const std::uint64_t zb = (static_cast<std::uint64_t>(b) * gv.z()[j]) % n;
        residues[j] = (za + n - zb) % n;
      }
      mat(a - 1, b - 1) = kernel_extended(spec, residues, n);
    }
  }
  Vector rhs(n);
  for (std::uint32_t k = 0; k < n; ++k) rhs[k] = f[k];
  const Vector x = mat.ldlt().solve(rhs);
  std::vector<double> out(n);
  for (std::uint32_t k = 0; k < n; ++k) out[k] = static_cast<double>(x[k]);
  return out;
}

double cbc_criterion_by_subsets(const GeneratingVector& gv, SmoothnessOrder alpha,
                                const WeightScheme& scheme, bool order_weighted) {
  const std::size_t s = gv.s();
  const std::size_t n = gv.n();
  double total = 0.0;
  std::vector<std::size_t> u;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << s); ++mask) {
    u.clear();
    for (std::size_t j = 0; j < s; ++j) {
      if (mask >> j & 1U) u.push_back(j + 1);
    }
    const double gamma = weight_of_subset(scheme, u);
    const double w = order_weighted ? static_cast<double>(u.size()) : 1.0;
    double sum = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      double prod = 1.0;
      for (std::size_t j : u) prod *= specfun::eta(alpha, gv.coordinate(k, j - 1), 0.0);
      sum += prod;
    }
    total += w * gamma * sum;
  }
  return total / static_cast<double>(n);
}

namespace {

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(3);
  o << std::scientific << v;
  return o.str();
}

}  // namespace

std::vector<CheckResult> run_kernel_checks() {
  std::vector<CheckResult> out;

  {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int alpha = 1; alpha <= 3; ++alpha) {
      double worst = 0.0;
      for (int i = 0; i < 20; ++i) {
        const double y = unif(rng);
        worst = std::max(worst, std::abs(specfun::eta(SmoothnessOrder(alpha), y, 0.0) -
                                         eta_fourier(alpha, y, 100000)));
      }
      const double tol = alpha == 1 ? 1e-4 : 1e-10;
      out.push_back({"eta Fourier series, alpha=" + std::to_string(alpha), worst <= tol,
                     "max deviation " + fmt(worst) + " (tol " + fmt(tol) + ")"});
    }
  }

  // alpha = 3 lattices are too ill-conditioned at n = 64 for 1e-10 agreement in double.
  const ProblemParams rough{2.4, 0.4 / std::sqrt(6.0), 1.0 / 1.1, 10};
  const ProblemParams mid{2.4, 0.4 / std::sqrt(6.0), 1.0 / 2.2, 10};
  const ProblemParams hard{2.4, 1.5 / std::sqrt(6.0), 1.0 / 2.2, 10};
  for (const auto& pp : {rough, mid, hard}) {
    const DerivedParams d = derive_params(pp);
    for (const WeightScheme& scheme : {WeightScheme(serendipitous_weights(d)), WeightScheme(spod_weights(d))}) {
      for (std::uint32_t n : {8U, 16U, 64U}) {
        const GeneratingVector gv = cbc_construct(n, pp.s, d.alpha, scheme);
        const KernelSpec spec(d.alpha, scheme, pp.s);
        std::vector<double> f(n);
        for (std::uint32_t k = 1; k <= n; ++k) {
          const auto t = node(gv, k);
          f[k - 1] = std::cos(2.0 * std::numbers::pi * (t[0] + 0.3 * t[1])) + 0.5 * t[2];
        }
        const Interpolant interp = fit(spec, gv, f);
        const auto fast = interp.coeffs();
        const std::vector<double> dense = dense_solve(spec, gv, f);
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          num = std::max(num, std::abs(fast[k] - dense[k]));
          den = std::max(den, std::abs(dense[k]));
        }
        const double rel = num / den;
        out.push_back({"circulant vs dense solve, " + std::string(scheme_name(scheme)) + ", alpha=" +
                           std::to_string(d.alpha.value()) + ", c*sqrt6=" +
                           fmt(pp.c * std::sqrt(6.0)) + ", n=" + std::to_string(n),
                       rel <= 1e-10, "relative deviation " + fmt(rel)});
      }
    }
  }

  {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int alpha = 1; alpha <= 2; ++alpha) {
      for (std::size_t s = 1; s <= 3; ++s) {
        const ProblemParams pp{2.4, 1.5 / std::sqrt(6.0), alpha == 1 ? 1.0 / 1.1 : 1.0 / 2.2, s};
        const DerivedParams d = derive_params(pp);
        const KernelSpec spec(d.alpha, spod_weights(d), s);
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
          std::vector<double> y(s), y2(s);
          for (auto& v : y) v = unif(rng);
          for (auto& v : y2) v = unif(rng);
          const double dp = kernel_eval(spec, y, y2);
          const double brute = kernel_by_subsets(spec, y, y2);
          worst = std::max(worst, std::abs(dp - brute) / std::abs(brute));
        }
        out.push_back({"SPOD kernel vs subset enumeration, alpha=" + std::to_string(alpha) +
                           ", s=" + std::to_string(s),
                       worst <= 1e-12, "relative deviation " + fmt(worst)});
      }
    }
  }
  return out;
}

}  // namespace lki::oracle
