#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "lki/errors.hpp"
#include "lki/fem.hpp"
#include "lki/field.hpp"

using namespace lki;
using doctest::Approx;
using std::numbers::pi;

namespace {

const ProblemParams kHard{2.4, 1.5 / std::sqrt(6.0), 1.0 / 2.2, 4};

// L2 error of the discrete solution of -Laplace u = 2 pi^2 sin(pi x) sin(pi y)
// against the nodal interpolant of the exact solution.
double manufactured_error(int m) {
  FemProblem prob;
  prob.mesh_exponent = m;
  prob.source = [](double x, double y) { return 2.0 * pi * pi * std::sin(pi * x) * std::sin(pi * y); };
  const FemSolver solver(prob);
  auto u = solver.solve_coefficients({}).values;
  const auto exact = solver.interpolate([](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
  for (std::size_t i = 0; i < u.size(); ++i) u[i] -= exact[i];
  return std::sqrt(solver.mass_inner(u, u));
}

}  // namespace

TEST_SUITE("field") {
  TEST_CASE("field values") {
    const FieldSpec f(kHard);
    CHECK(f.amplitude(1) == Approx(kHard.c));
    CHECK(f.amplitude(2) == Approx(kHard.c * std::pow(2.0, -2.4)));
    CHECK(f.psi(1, 0.5, 0.5) == Approx(kHard.c));
    CHECK(std::abs(f.psi(2, 0.5, 0.5)) < 1e-15);
    const std::vector<double> zero(4, 0.0);
    CHECK(f.eval(0.3, 0.7, zero) == 1.0);
    const std::vector<double> y{0.1, 0.6, 0.25, 0.8};
    CHECK(f.eval(0.3, 0.7, y) == Approx(f.eval_affine(0.3, 0.7, periodic_to_affine(y))).epsilon(1e-14));
    // coordinates beyond s are ignored
    const std::vector<double> longer{0.1, 0.6, 0.25, 0.8, 0.3, 0.9};
    CHECK(f.eval(0.3, 0.7, longer) == f.eval(0.3, 0.7, y));
    CHECK_THROWS_AS(f.eval(0.3, 0.7, std::vector<double>{0.1}), ConfigError);
  }

  TEST_CASE("coefficient stays within its bounds") {
    const FieldSpec f(kHard);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
      const std::vector<double> y{u(rng), u(rng), u(rng), u(rng)};
      const double a = f.eval(u(rng), u(rng), y);
      CHECK(a >= f.derived().a_min - 1e-14);
      CHECK(a <= f.derived().a_max + 1e-14);
    }
  }

  TEST_CASE("affine and periodic coordinates") {
    const std::vector<double> y{0.0, 0.1, 0.25, -0.2};
    const auto z = periodic_to_affine(y);
    CHECK(z[2] == Approx(1.0));
    const auto back = affine_to_periodic(z);
    for (std::size_t j = 0; j < y.size(); ++j) CHECK(back[j] == Approx(y[j]).epsilon(1e-12));
    CHECK_THROWS_AS(affine_to_periodic(std::vector<double>{1.5}), DomainError);
    CHECK(arcsine_cdf(0.0) == Approx(0.5));
    CHECK(arcsine_cdf(-1.0) == 0.0);
    CHECK(arcsine_cdf(1.0) == 1.0);
    CHECK(arcsine_cdf(2.0) == 1.0);
    CHECK(arcsine_cdf(0.5) == Approx(2.0 / 3.0));
  }

  TEST_CASE("sin(2 pi U) follows the arcsine law") {
    CHECK(transform_cdf_distance(100000, 12345) < 0.01);
    CHECK_THROWS_AS(transform_cdf_distance(100, 1), DomainError);
  }
}

TEST_SUITE("fem") {
  TEST_CASE("mesh bookkeeping") {
    FemProblem prob;
    prob.mesh_exponent = 3;
    const FemSolver solver(prob);
    CHECK(solver.unknowns() == 49);
    CHECK(solver.dimension() == 0);
    const auto [x, y] = solver.node_position(0);
    CHECK(x == 0.125);
    CHECK(y == 0.125);
    const auto [x2, y2] = solver.node_position(8);
    CHECK(x2 == 0.25);
    CHECK(y2 == 0.25);
  }

  TEST_CASE("zero source gives zero solution") {
    FemProblem prob;
    prob.mesh_exponent = 4;
    prob.source = [](double, double) { return 0.0; };
    const FemSolver solver(prob, FieldSpec(kHard));
    const auto u = solver.solve(std::vector<double>{0.1, 0.2, 0.3, 0.4});
    for (double v : u.values) CHECK(v == 0.0);
  }

  TEST_CASE("mass matrix and integrals") {
    FemProblem prob;
    prob.mesh_exponent = 5;
    const FemSolver solver(prob);
    const auto s = solver.interpolate([](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
    CHECK(solver.l2_norm(FemSolution{s}) == Approx(0.5).epsilon(2e-3));
    CHECK(solver.integral(s) == Approx(4.0 / (pi * pi)).epsilon(2e-3));
  }

  TEST_CASE("manufactured solution converges at second order") {
    const double e3 = manufactured_error(3);
    const double e4 = manufactured_error(4);
    const double e5 = manufactured_error(5);
    const double r1 = std::log2(e3 / e4);
    const double r2 = std::log2(e4 / e5);
    CHECK(r1 == Approx(2.0).epsilon(0.125));
    CHECK(r2 == Approx(2.0).epsilon(0.125));
    CHECK(e4 / e5 >= 3.5);
    CHECK(e4 / e5 <= 4.5);
  }

  TEST_CASE("transpose symmetry for a constant coefficient and source") {
    FemProblem prob;
    prob.mesh_exponent = 4;
    prob.source = [](double, double) { return 1.0; };
    const FemSolver solver(prob);
    const auto u = solver.solve_coefficients({}).values;
    const std::size_t m = 15;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) CHECK(u[i * m + j] == Approx(u[j * m + i]).epsilon(1e-12));
    }
  }

  TEST_CASE("parameters beyond the truncation dimension are ignored") {
    FemProblem prob;
    prob.mesh_exponent = 4;
    const FemSolver solver(prob, FieldSpec(kHard));
    const std::vector<double> y{0.1, 0.2, 0.3, 0.4};
    const std::vector<double> y_long{0.1, 0.2, 0.3, 0.4, 0.77, 0.05};
    CHECK(solver.solve(y).values == solver.solve(y_long).values);
  }

  TEST_CASE("periodic and affine parametrisations agree") {
    FemProblem prob;
    prob.mesh_exponent = 4;
    const FemSolver solver(prob, FieldSpec(kHard));
    const std::vector<double> y{0.1, 0.2, 0.3, 0.4};
    const auto a = solver.solve(y).values;
    const auto b = solver.solve_affine(periodic_to_affine(y)).values;
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == Approx(b[i]).epsilon(1e-12));
  }

  TEST_CASE("batch solves match single solves") {
    FemProblem prob;
    prob.mesh_exponent = 3;
    const FemSolver solver(prob, FieldSpec(kHard));
    const std::vector<double> pts{0.1, 0.2, 0.3, 0.4, 0.0, 0.9, 0.8, 0.7, 0.6, 0.5};
    const auto batch = solver.solve_batch(pts, 2, 5);
    for (std::size_t i = 0; i < 2; ++i) {
      const auto single = solver.solve(std::span<const double>(pts).subspan(i * 5, 5)).values;
      for (std::size_t k = 0; k < single.size(); ++k) {
        CHECK(batch[i * solver.unknowns() + k] == Approx(single[k]).epsilon(1e-13));
      }
    }
  }

  TEST_CASE("iterative solver on a fine mesh") {
    FemProblem prob;
    prob.mesh_exponent = 8;
    const FemSolver solver(prob, FieldSpec(kHard));
    FemProblem coarse = prob;
    coarse.mesh_exponent = 7;
    const FemSolver direct(coarse, FieldSpec(kHard));
    const std::vector<double> y{0.1, 0.2, 0.3, 0.4};
    const auto fine = solver.solve(y);
    const auto ref = direct.solve(y);
    CHECK(solver.integral(fine.values) == Approx(direct.integral(ref.values)).epsilon(1e-3));
  }
}
