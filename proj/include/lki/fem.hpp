#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lki/field.hpp"

namespace lki {

/// Piecewise-linear elements on a uniform triangulation of (0,1)^2 with h = 2^{-m};
/// every square is split along its rising diagonal. Dirichlet zero boundary.
struct FemProblem {
  int mesh_exponent = 5;
  std::function<double(double, double)> source = [](double, double x2) { return x2; };

  std::size_t cells_per_side() const noexcept { return std::size_t{1} << mesh_exponent; }
  std::size_t interior_nodes() const noexcept {
    return (cells_per_side() - 1) * (cells_per_side() - 1);
  }
};

/// Nodal values on interior nodes; boundary values are zero.
struct FemSolution {
  std::vector<double> values;
};

/// Assembles and solves -div(a(., y) grad u) = q for many parameter points.
///
/// The coefficient is sampled at triangle centroids and the load uses the same
/// one-point rule. Mesh exponents up to kDirectSolverMaxExponent use a sparse
/// Cholesky factorisation, finer meshes conjugate gradients.
class FemSolver {
 public:
  static constexpr int kDirectSolverMaxExponent = 7;
  static constexpr double kIterativeTolerance = 1e-12;

  FemSolver(FemProblem problem, FieldSpec field);
  /// Constant coefficient a = 1.
  explicit FemSolver(FemProblem problem);
  ~FemSolver();
  FemSolver(FemSolver&&) noexcept;
  FemSolver& operator=(FemSolver&&) noexcept;

  const FemProblem& problem() const noexcept { return problem_; }
  std::size_t unknowns() const noexcept { return problem_.interior_nodes(); }
  std::size_t dimension() const noexcept { return field_ ? field_->s() : 0; }

  /// Coordinates of interior node i (row-major from the lower-left corner).
  std::pair<double, double> node_position(std::size_t i) const;

  /// a = 1 + sum_j w_j psi_j; w may be empty for a = 1.
  FemSolution solve_coefficients(std::span<const double> w) const;
  /// Periodic parametrisation, w_j = sin(2 pi y_j); coordinates beyond s are ignored.
  FemSolution solve(std::span<const double> y) const;
  /// Affine parametrisation, w_j = z_j.
  FemSolution solve_affine(std::span<const double> z) const;

  /// Solves at count periodic points (row-major count x stride, first s coordinates used).
  /// Returns the node-major matrix out[i * unknowns() + node].
  std::vector<double> solve_batch(std::span<const double> points, std::size_t count,
                                  std::size_t stride) const;

  /// v^T M w with M the consistent P1 mass matrix on interior nodes.
  double mass_inner(std::span<const double> v, std::span<const double> w) const;
  /// sqrt(v^T M v), the L2(D) norm of the finite element function.
  double l2_norm(const FemSolution& v) const { return std::sqrt(mass_inner(v.values, v.values)); }
  /// Integral of the finite element function over D.
  double integral(std::span<const double> v) const;

  /// Nodal interpolant of g on interior nodes.
  std::vector<double> interpolate(const std::function<double(double, double)>& g) const;

 private:
  struct Assembly;
  struct Workspace;

  void build_mesh();
  void centroid_field(std::span<const double> w, std::vector<double>& grid) const;
  std::vector<double> solve_into(std::span<const double> w, Workspace& ws) const;

  FemProblem problem_;
  std::optional<FieldSpec> field_;
  std::unique_ptr<Assembly> asm_;
};

}  // namespace lki
