#include "lki/lattice.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "lki/errors.hpp"
#include "order_dp.hpp"
#include "lki/simd/kernels.hpp"

namespace lki {

GeneratingVector::GeneratingVector(std::uint32_t n, std::vector<std::uint32_t> z)
    : n_(n), z_(std::move(z)) {
  if (n_ == 0) throw ConfigError("lattice size n must be positive");
  for (std::size_t j = 0; j < z_.size(); ++j) {
    const std::uint32_t zj = z_[j];
    const bool ok = n_ == 1 ? zj == 0 : (zj >= 1 && zj < n_ && std::gcd(zj, n_) == 1);
    if (!ok) {
      throw ConfigError("generating vector component z_" + std::to_string(j + 1) + " = " +
                        std::to_string(zj) + " invalid for n = " + std::to_string(n_));
    }
  }
}

GeneratingVector GeneratingVector::truncated(std::size_t d) const {
  if (d > z_.size()) throw IndexError("cannot truncate to more components than present");
  return GeneratingVector(n_, std::vector<std::uint32_t>(z_.begin(), z_.begin() + d));
}

std::vector<double> node(const GeneratingVector& gv, std::size_t k) {
  if (k < 1 || k > gv.n()) {
    throw IndexError("node index " + std::to_string(k) + " outside 1.." + std::to_string(gv.n()));
  }
  std::vector<double> t(gv.s());
  for (std::size_t j = 0; j < gv.s(); ++j) t[j] = gv.coordinate(k, j);
  return t;
}

CbcBuilder::CbcBuilder(std::uint32_t n, SmoothnessOrder alpha, const WeightScheme& scheme,
                       const CbcOptions& options)
    : n_(n),
      alpha_(alpha.value()),
      s_max_(scheme_dimension(scheme)),
      product_form_(is_product_form(scheme)),
      order_weighted_(options.order_weighted) {
  if (n < 2) throw ConfigError("CBC needs n >= 2: no generating vector candidates for n = 1");
  validate(scheme);

  if (product_form_) {
    auto factors = product_factors(scheme);
    gamma_.assign(factors.begin(), factors.end());
    if (options.lambda_power) {
      for (double& g : gamma_) g = std::pow(g, options.lambda);
    }
    prod_minus_one_.assign(n, 0.0);
    if (order_weighted_) order_sum_.assign(n, 0.0);
  } else {
    if (options.order_weighted || options.lambda_power) {
      throw ConfigError("order-weighted and lambda-powered CBC criteria need product-form weights");
    }
    if (const auto* spod = std::get_if<SpodWeights>(&scheme); spod && spod->alpha != alpha_) {
      throw ConfigError("SPOD weights built for alpha = " + std::to_string(spod->alpha) +
                        ", kernel uses alpha = " + std::to_string(alpha_));
    }
    order_ = std::make_shared<const detail::OrderDependentFactors>(scheme);
    const std::size_t width = order_->width();
    orders_.assign(static_cast<std::size_t>(n) * width, 0.0);
    for (std::uint32_t r = 0; r < n; ++r) orders_[r * width] = 1.0;
  }

  for (std::uint32_t z = 1; z < n; ++z) {
    if (std::gcd(z, n) == 1) candidates_.push_back(z);
  }
  omega_.resize(n);
  for (std::uint32_t r = 0; r < n; ++r) {
    omega_[r] = specfun::eta(alpha, static_cast<double>(r) / n, 0.0);
  }
  // sum_r eta(r/n) = 2 n^{1 - 2 alpha} zeta(2 alpha), tiny next to the individual terms
  omega_total_ = 2.0 * std::pow(static_cast<double>(n), 1.0 - 2.0 * alpha_) * specfun::zeta(2.0 * alpha_);
  slope_.resize(n);
  if (s_max_ > 0) prepare_next();
}

void CbcBuilder::center_slope() {
  // Every candidate permutes omega, so the slope's constant part contributes
  // slope_[0] * omega_total_ regardless of z.
  const double ref = slope_[0];
  for (double& v : slope_) v -= ref;
  base_ += ref * omega_total_;
}

void CbcBuilder::prepare_next() {
  const std::size_t j = chosen_.size();  // 0-based coordinate being chosen
  if (product_form_) {
    const double g = gamma_[j];
    if (order_weighted_) {
      base_ = std::accumulate(order_sum_.begin(), order_sum_.end(), 0.0);
      for (std::uint32_t r = 0; r < n_; ++r) {
        slope_[r] = g * (order_sum_[r] + 1.0 + prod_minus_one_[r]);
      }
    } else {
      base_ = std::accumulate(prod_minus_one_.begin(), prod_minus_one_.end(), 0.0);
      for (std::uint32_t r = 0; r < n_; ++r) slope_[r] = g * (1.0 + prod_minus_one_[r]);
    }
    center_slope();
    return;
  }

  const std::size_t width = order_->width();
  const std::size_t top = j * order_->nu_max();  // highest reachable order so far
  base_ = 0.0;
  for (std::uint32_t r = 0; r < n_; ++r) {
    const double* row = &orders_[r * width];
    for (std::size_t l = 1; l <= top; ++l) base_ += row[l];
    slope_[r] = order_->fold_slope(j, row, top);
  }
  center_slope();
}

std::vector<double> CbcBuilder::candidate_criteria() const {
  if (chosen_.size() >= s_max_) throw IndexError("weight scheme exhausted; cannot extend further");
  std::vector<double> values(candidates_.size());
  const auto& kernels = simd::active();
#pragma omp parallel
  {
    std::vector<std::uint32_t> idx(n_);
#pragma omp for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(candidates_.size()); ++c) {
      const std::uint32_t z = candidates_[c];
      std::uint32_t pos = 0;
      for (std::uint32_t r = 0; r < n_; ++r) {
        idx[r] = pos;
        pos += z;
        if (pos >= n_) pos -= n_;
      }
      const double g = kernels.gather_dot(slope_.data(), omega_.data(), idx.data(), n_);
      values[c] = (base_ + g) / static_cast<double>(n_);
    }
  }
  return values;
}

std::uint32_t CbcBuilder::extend() {
  const std::vector<double> values = candidate_criteria();
  std::size_t best = 0;
  for (std::size_t c = 1; c < values.size(); ++c) {
    if (values[c] < values[best] - kTieTolerance * std::abs(values[best])) best = c;
  }
  const std::uint32_t z = candidates_[best];
  apply(z);
  criterion_ = values[best];
  return z;
}

void CbcBuilder::apply(std::uint32_t z) {
  const std::size_t j = chosen_.size();
  std::uint32_t pos = 0;
  if (product_form_) {
    const double g = gamma_[j];
    for (std::uint32_t r = 0; r < n_; ++r) {
      const double x = g * omega_[pos];
      const double prod = 1.0 + prod_minus_one_[r];
      if (order_weighted_) order_sum_[r] += (order_sum_[r] + prod) * x;
      prod_minus_one_[r] += x * prod;
      pos += z;
      if (pos >= n_) pos -= n_;
    }
  } else {
    const std::size_t width = order_->width();
    const std::size_t top = j * order_->nu_max();
    for (std::uint32_t r = 0; r < n_; ++r) {
      order_->fold(j, omega_[pos], &orders_[r * width], top);
      pos += z;
      if (pos >= n_) pos -= n_;
    }
  }
  chosen_.push_back(z);
  if (chosen_.size() < s_max_) prepare_next();
}

GeneratingVector cbc_construct(std::uint32_t n, std::size_t s, SmoothnessOrder alpha,
                               const WeightScheme& scheme, const CbcOptions& options) {
  if (s > scheme_dimension(scheme)) {
    throw ConfigError("weight scheme covers " + std::to_string(scheme_dimension(scheme)) +
                      " dimensions, " + std::to_string(s) + " requested");
  }
  CbcBuilder builder(n, alpha, scheme, options);
  for (std::size_t d = 0; d < s; ++d) builder.extend();
  return builder.vector();
}

void save_vector(const GeneratingVector& gv, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << gv.n() << ' ' << gv.s() << '\n';
  for (std::size_t j = 0; j < gv.s(); ++j) out << (j ? " " : "") << gv.z()[j];
  out << '\n';
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

namespace {

std::vector<std::uint64_t> parse_integers(const std::string& line, std::size_t lineno) {
  std::istringstream in(line);
  std::vector<std::uint64_t> values;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      if (token.front() == '-') throw std::invalid_argument("negative");
      v = std::stoull(token, &used);
    } catch (const std::exception&) {
      throw ParseError("expected a nonnegative integer, got '" + token + "'", lineno);
    }
    if (used != token.size()) throw ParseError("malformed integer '" + token + "'", lineno);
    values.push_back(v);
  }
  return values;
}

}  // namespace

GeneratingVector load_vector(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open generating vector file '" + path.string() + "'");
  std::string header;
  std::string body;
  if (!std::getline(in, header)) throw ParseError("missing header 'n s'", 1);
  const auto head = parse_integers(header, 1);
  if (head.size() != 2) throw ParseError("header must contain exactly 'n s'", 1);
  if (head[0] == 0 || head[0] > UINT32_MAX) throw ParseError("n out of range", 1);
  if (!std::getline(in, body)) throw ParseError("missing generating vector components", 2);
  const auto comps = parse_integers(body, 2);
  if (comps.size() != head[1]) {
    throw ParseError("expected " + std::to_string(head[1]) + " components, found " +
                         std::to_string(comps.size()),
                     2);
  }
  std::string rest;
  std::size_t lineno = 2;
  while (std::getline(in, rest)) {
    ++lineno;
    if (rest.find_first_not_of(" \t\r") != std::string::npos) {
      throw ParseError("unexpected trailing content", lineno);
    }
  }
  std::vector<std::uint32_t> z;
  z.reserve(comps.size());
  for (auto v : comps) {
    if (v > UINT32_MAX) throw ParseError("component out of range", 2);
    z.push_back(static_cast<std::uint32_t>(v));
  }
  try {
    return GeneratingVector(static_cast<std::uint32_t>(head[0]), std::move(z));
  } catch (const ConfigError& e) {
    throw ParseError(e.what(), 2);
  }
}

}  // namespace lki
