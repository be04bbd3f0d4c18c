#include "lki/fem.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "lki/errors.hpp"
#include "lki/simd/kernels.hpp"

namespace lki {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Local = std::array<std::array<double, 3>, 3>;
using Vertices = std::array<std::array<double, 2>, 3>;

constexpr std::ptrdiff_t kBoundary = -1;

double signed_det(const Vertices& v) {
  return (v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) - (v[2][0] - v[0][0]) * (v[1][1] - v[0][1]);
}

// P1 stiffness of a triangle with unit coefficient.
Local stiffness(const Vertices& v) {
  const double det = signed_det(v);
  const double area = 0.5 * std::abs(det);
  std::array<std::array<double, 2>, 3> grad{};
  for (int a = 0; a < 3; ++a) {
    const auto& p = v[(a + 1) % 3];
    const auto& q = v[(a + 2) % 3];
    grad[a] = {(p[1] - q[1]) / det, (q[0] - p[0]) / det};
  }
  Local k{};
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      k[a][b] = area * (grad[a][0] * grad[b][0] + grad[a][1] * grad[b][1]);
    }
  }
  return k;
}

std::size_t find_slot(const SparseMatrix& m, int row, int col) {
  const int* inner = m.innerIndexPtr();
  const int begin = m.outerIndexPtr()[col];
  const int end = m.outerIndexPtr()[col + 1];
  const int* it = std::lower_bound(inner + begin, inner + end, row);
  return static_cast<std::size_t>(it - inner);
}

}  // namespace

struct FemSolver::Assembly {
  std::size_t cells = 0;
  double h = 0.0;
  // Per triangle: interior node index per vertex (or kBoundary), kind 0 = lower, 1 = upper,
  // and its centroid's position in the (2 cells) x (2 cells) field grid.
  std::vector<std::array<std::ptrdiff_t, 3>> tri_nodes;
  std::vector<std::uint8_t> tri_kind;
  std::vector<std::size_t> tri_grid;
  std::array<Local, 2> local{};

  // values[slot] += field[tri] * local[kind][a][b]
  struct Contribution {
    std::size_t slot;
    std::uint32_t tri;
    double value;
  };
  std::vector<Contribution> contributions;
  SparseMatrix pattern;
  Eigen::VectorXd load;
  SparseMatrix mass;
  std::vector<double> hat_integral;
  std::vector<double> centroid_coord;  // (i + 1/3) h at 2i, (i + 2/3) h at 2i + 1
  std::vector<double> sin_table;       // row j-1: sin(j pi centroid_coord[q])
};

struct FemSolver::Workspace {
  SparseMatrix matrix;
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt;
  bool analyzed = false;
  std::vector<double> grid;
  std::vector<double> scratch;
};

FemSolver::FemSolver(FemProblem problem) : problem_(std::move(problem)) { build_mesh(); }

FemSolver::FemSolver(FemProblem problem, FieldSpec field)
    : problem_(std::move(problem)), field_(std::move(field)) {
  build_mesh();
  const std::size_t s = field_->s();
  const std::size_t g = 2 * asm_->cells;
  asm_->sin_table.resize(s * g);
  for (std::size_t j = 1; j <= s; ++j) {
    for (std::size_t q = 0; q < g; ++q) {
      asm_->sin_table[(j - 1) * g + q] =
          std::sin(static_cast<double>(j) * std::numbers::pi * asm_->centroid_coord[q]);
    }
  }
}

FemSolver::~FemSolver() = default;
FemSolver::FemSolver(FemSolver&&) noexcept = default;
FemSolver& FemSolver::operator=(FemSolver&&) noexcept = default;

void FemSolver::build_mesh() {
  if (problem_.mesh_exponent < 1 || problem_.mesh_exponent > 12) {
    throw ConfigError("mesh exponent " + std::to_string(problem_.mesh_exponent) +
                      " outside supported range 1..12");
  }
  asm_ = std::make_unique<Assembly>();
  Assembly& a = *asm_;
  const std::size_t N = problem_.cells_per_side();
  const std::size_t inner = N - 1;
  a.cells = N;
  a.h = 1.0 / static_cast<double>(N);
  const double h = a.h;

  auto interior = [&](std::size_t ix, std::size_t iy) -> std::ptrdiff_t {
    if (ix == 0 || iy == 0 || ix == N || iy == N) return kBoundary;
    return static_cast<std::ptrdiff_t>((iy - 1) * inner + (ix - 1));
  };

  a.centroid_coord.resize(2 * N);
  for (std::size_t i = 0; i < N; ++i) {
    a.centroid_coord[2 * i] = (static_cast<double>(i) + 1.0 / 3.0) * h;
    a.centroid_coord[2 * i + 1] = (static_cast<double>(i) + 2.0 / 3.0) * h;
  }

  const Vertices lower{{{0.0, 0.0}, {h, 0.0}, {h, h}}};
  const Vertices upper{{{0.0, 0.0}, {h, h}, {0.0, h}}};
  a.local = {stiffness(lower), stiffness(upper)};
  const double area = 0.5 * h * h;

  const std::size_t ntri = 2 * N * N;
  a.tri_nodes.reserve(ntri);
  a.tri_kind.reserve(ntri);
  a.tri_grid.reserve(ntri);
  a.load = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(unknowns()));
  a.hat_integral.assign(unknowns(), 0.0);
  std::vector<Eigen::Triplet<double, int>> pattern_entries;
  std::vector<Eigen::Triplet<double, int>> mass_entries;

  for (std::size_t cy = 0; cy < N; ++cy) {
    for (std::size_t cx = 0; cx < N; ++cx) {
      const std::array<std::array<std::size_t, 2>, 3> lo{{{cx, cy}, {cx + 1, cy}, {cx + 1, cy + 1}}};
      const std::array<std::array<std::size_t, 2>, 3> up{{{cx, cy}, {cx + 1, cy + 1}, {cx, cy + 1}}};
      for (std::uint8_t kind = 0; kind < 2; ++kind) {
        const auto& verts = kind == 0 ? lo : up;
        std::array<std::ptrdiff_t, 3> ids{};
        for (int v = 0; v < 3; ++v) ids[v] = interior(verts[v][0], verts[v][1]);
        // Centroid: lower at ((cx + 2/3) h, (cy + 1/3) h), upper at ((cx + 1/3) h, (cy + 2/3) h).
        const std::size_t qx = kind == 0 ? 2 * cx + 1 : 2 * cx;
        const std::size_t qy = kind == 0 ? 2 * cy : 2 * cy + 1;
        const double q = problem_.source(a.centroid_coord[qx], a.centroid_coord[qy]);
        for (int v = 0; v < 3; ++v) {
          if (ids[v] == kBoundary) continue;
          a.load[ids[v]] += q * area / 3.0;
          a.hat_integral[ids[v]] += area / 3.0;
          for (int w = 0; w < 3; ++w) {
            if (ids[w] == kBoundary) continue;
            pattern_entries.emplace_back(static_cast<int>(ids[v]), static_cast<int>(ids[w]), 0.0);
            mass_entries.emplace_back(static_cast<int>(ids[v]), static_cast<int>(ids[w]),
                                      area / 12.0 * (v == w ? 2.0 : 1.0));
          }
        }
        a.tri_nodes.push_back(ids);
        a.tri_kind.push_back(kind);
        a.tri_grid.push_back(qy * 2 * N + qx);
      }
    }
  }

  const auto dim = static_cast<Eigen::Index>(unknowns());
  a.pattern.resize(dim, dim);
  a.pattern.setFromTriplets(pattern_entries.begin(), pattern_entries.end());
  a.pattern.makeCompressed();
  a.mass.resize(dim, dim);
  a.mass.setFromTriplets(mass_entries.begin(), mass_entries.end());
  a.mass.makeCompressed();

  for (std::size_t t = 0; t < a.tri_nodes.size(); ++t) {
    const auto& ids = a.tri_nodes[t];
    const Local& k = a.local[a.tri_kind[t]];
    for (int v = 0; v < 3; ++v) {
      if (ids[v] == kBoundary) continue;
      for (int w = 0; w < 3; ++w) {
        if (ids[w] == kBoundary || k[v][w] == 0.0) continue;
        a.contributions.push_back({find_slot(a.pattern, static_cast<int>(ids[v]), static_cast<int>(ids[w])),
                                   static_cast<std::uint32_t>(t), k[v][w]});
      }
    }
  }
}

std::pair<double, double> FemSolver::node_position(std::size_t i) const {
  if (i >= unknowns()) throw IndexError("interior node index out of range");
  const std::size_t inner = asm_->cells - 1;
  return {static_cast<double>(i % inner + 1) * asm_->h, static_cast<double>(i / inner + 1) * asm_->h};
}

void FemSolver::centroid_field(std::span<const double> w, std::vector<double>& grid) const {
  const std::size_t g = 2 * asm_->cells;
  grid.assign(g * g, 1.0);
  if (w.empty()) return;
  const std::size_t s = dimension();
  if (w.size() < s) throw ConfigError("coefficient vector shorter than field dimension");
  std::vector<double> scaled(g);
  for (std::size_t j = 0; j < s; ++j) {
    const double coef = w[j] * field_->amplitude(j + 1);
    if (coef == 0.0) continue;
    const double* row = &asm_->sin_table[j * g];
    for (std::size_t q = 0; q < g; ++q) scaled[q] = coef * row[q];
    // grid[qy][qx] += sin(j pi x2) * coef * sin(j pi x1)
    for (std::size_t qy = 0; qy < g; ++qy) {
      simd::axpy(row[qy], scaled, std::span(grid).subspan(qy * g, g));
    }
  }
}

std::vector<double> FemSolver::solve_into(std::span<const double> w, Workspace& ws) const {
  const Assembly& a = *asm_;
  centroid_field(w, ws.grid);
  if (ws.matrix.rows() == 0) ws.matrix = a.pattern;
  double* values = ws.matrix.valuePtr();
  std::fill(values, values + ws.matrix.nonZeros(), 0.0);
  for (const auto& c : a.contributions) values[c.slot] += ws.grid[a.tri_grid[c.tri]] * c.value;

  Eigen::VectorXd x;
  if (problem_.mesh_exponent <= kDirectSolverMaxExponent) {
    if (!ws.analyzed) {
      ws.llt.analyzePattern(ws.matrix);
      ws.analyzed = true;
    }
    ws.llt.factorize(ws.matrix);
    if (ws.llt.info() != Eigen::Success) {
      throw SolverError("stiffness matrix is not positive definite", NAN);
    }
    x = ws.llt.solve(a.load);
  } else {
    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(kIterativeTolerance);
    cg.setMaxIterations(static_cast<Eigen::Index>(20 * a.cells));
    cg.compute(ws.matrix);
    x = cg.solve(a.load);
    if (cg.info() != Eigen::Success) {
      throw SolverError("conjugate gradients did not converge, relative residual " +
                            std::to_string(cg.error()),
                        cg.error());
    }
  }
  return std::vector<double>(x.data(), x.data() + x.size());
}

FemSolution FemSolver::solve_coefficients(std::span<const double> w) const {
  Workspace ws;
  return {solve_into(w, ws)};
}

FemSolution FemSolver::solve(std::span<const double> y) const {
  const std::size_t s = dimension();
  if (y.size() < s) throw ConfigError("parameter point has fewer than s coordinates");
  return solve_coefficients(periodic_to_affine(y.first(s)));
}

FemSolution FemSolver::solve_affine(std::span<const double> z) const {
  const std::size_t s = dimension();
  if (z.size() < s) throw ConfigError("parameter point has fewer than s coordinates");
  return solve_coefficients(z.first(s));
}

std::vector<double> FemSolver::solve_batch(std::span<const double> points, std::size_t count,
                                           std::size_t stride) const {
  const std::size_t s = dimension();
  if (stride < s || points.size() < count * stride) throw ConfigError("point matrix too small");
  const std::size_t m = unknowns();
  std::vector<double> out(count * m);
  bool failed = false;
  std::string failure;
#pragma omp parallel
  {
    Workspace ws;
    std::vector<double> w;
#pragma omp for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
      try {
        w = periodic_to_affine(points.subspan(i * stride, s));
        const auto x = solve_into(w, ws);
        std::copy(x.begin(), x.end(), out.begin() + i * m);
      } catch (const std::exception& e) {
#pragma omp critical
        {
          failed = true;
          failure = e.what();
        }
      }
    }
  }
  if (failed) throw SolverError("batch solve failed: " + failure, NAN);
  return out;
}

double FemSolver::mass_inner(std::span<const double> v, std::span<const double> w) const {
  if (v.size() != unknowns() || w.size() != unknowns()) throw ConfigError("vector length mismatch");
  Eigen::Map<const Eigen::VectorXd> ev(v.data(), static_cast<Eigen::Index>(v.size()));
  Eigen::Map<const Eigen::VectorXd> ew(w.data(), static_cast<Eigen::Index>(w.size()));
  return ev.dot(asm_->mass * ew);
}

double FemSolver::integral(std::span<const double> v) const {
  if (v.size() != unknowns()) throw ConfigError("vector length mismatch");
  return simd::dot(v, asm_->hat_integral);
}

std::vector<double> FemSolver::interpolate(const std::function<double(double, double)>& g) const {
  std::vector<double> out(unknowns());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto [x1, x2] = node_position(i);
    out[i] = g(x1, x2);
  }
  return out;
}

}  // namespace lki
