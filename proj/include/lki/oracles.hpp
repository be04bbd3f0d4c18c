#pragma once

// Reference computations that avoid the fast paths they check: truncated
// Fourier series, subset enumeration, dense linear algebra.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lki/kernel.hpp"
#include "lki/lattice.hpp"
#include "lki/specfun.hpp"
#include "lki/weights.hpp"

namespace lki::oracle {

/// 2 sum_{h=1}^{terms} cos(2 pi h y) / h^{2 alpha}
double eta_fourier(int alpha, double y, std::size_t terms);

/// sum_{k=1}^{terms} k^{-x} and the integral bounds on the remaining tail.
struct ZetaBracket {
  double lower;
  double upper;
};
ZetaBracket zeta_bracket(double x, std::size_t terms);

/// sum over all 2^s subsets u of gamma_u prod_{j in u} eta(y_j, y2_j), gamma_u from weight_of_subset.
double kernel_by_subsets(const KernelSpec& spec, std::span<const double> y, std::span<const double> y2);

/// Solves the dense system with a symmetric factorisation in extended precision,
/// assembling every entry independently from exact lattice residues.
std::vector<double> dense_solve(const KernelSpec& spec, const GeneratingVector& gv,
                                std::span<const double> f);

/// (1/n) sum_k sum_{u != {}} w_u gamma_u prod_{j in u} eta(t_{k,j}, 0) with w_u = 1, or
/// max(|u|, 1) when order_weighted, by subset enumeration over the vector's s coordinates.
double cbc_criterion_by_subsets(const GeneratingVector& gv, SmoothnessOrder alpha,
                                const WeightScheme& scheme, bool order_weighted);

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

/// Oracle suite behind the CLI kernel-check command.
std::vector<CheckResult> run_kernel_checks();

}  // namespace lki::oracle
