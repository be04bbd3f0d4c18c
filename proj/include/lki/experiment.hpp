#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lki/fem.hpp"
#include "lki/kernel.hpp"
#include "lki/lattice.hpp"
#include "lki/weights.hpp"

namespace lki {

enum class WeightVariant { spod, serendipitous, product };

std::string_view variant_name(WeightVariant v) noexcept;
WeightVariant parse_weight_variant(std::string_view name);

/// Weights for a variant. The product variant uses gamma_j = b_j.
WeightScheme make_weights(WeightVariant variant, const DerivedParams& derived);

struct EvalSource {
  enum class Kind { sobol, seeded_uniform };
  Kind kind = Kind::seeded_uniform;
  std::filesystem::path sobol_path;
  std::uint64_t seed = 0;
};

struct ExperimentConfig {
  ProblemParams params;
  WeightVariant weights = WeightVariant::serendipitous;
  std::vector<std::uint32_t> n_list;
  int mesh_exponent = 5;
  std::size_t L = 100;
  EvalSource eval;
  std::optional<std::filesystem::path> vector_cache;  ///< directory of cached generating vectors
  std::optional<std::filesystem::path> output_path;   ///< CSV destination
  CbcOptions cbc;

  /// Throws ConfigError on an empty or non-increasing n list, n < 2 or L = 0.
  void validate() const;
};

struct ConvergenceRecord {
  double theta = 0.0;
  double c = 0.0;
  double p = 0.0;
  std::size_t s = 0;
  int alpha = 0;
  double lambda = 0.0;
  std::string weights;
  std::uint32_t n = 0;
  double error = 0.0;  ///< NaN for failed rows
  double seconds = 0.0;
  std::string status;  ///< "ok" or "failed: <reason>"
};

/// Evaluation points y_1..y_L, row-major L x s. Sobol points skip the origin.
std::vector<double> eval_points(const ExperimentConfig& cfg);

/// Generating vector for one lattice size, loaded from or written to the cache when configured.
GeneratingVector obtain_vector(const ExperimentConfig& cfg, std::uint32_t n, SmoothnessOrder alpha,
                               const WeightScheme& scheme);

/// Finite element solutions at all lattice nodes, node-major n x unknowns.
std::vector<double> lattice_solutions(const FemSolver& solver, const GeneratingVector& gv);

/// sqrt( 1/(L n) sum_l sum_k || u(., y_l + t_k) - u_n(., y_l + t_k) ||^2_{L2(D)} ),
/// with u from fresh finite element solves and u_n from the vector-valued interpolant.
/// points is row-major L x s.
double estimate_error(const FemSolver& solver, const VectorInterpolant& interp,
                      std::span<const double> points, std::size_t L);

/// One record per n; stage failures become rows with error = NaN. When
/// cfg.output_path is set the CSV is written row by row. Progress lines go to log.
std::vector<ConvergenceRecord> run_convergence(const ExperimentConfig& cfg, std::ostream* log = nullptr);

struct RateFit {
  double slope = 0.0;        ///< least-squares slope of log(error) against log(n)
  double intercept = 0.0;
  double theoretical = 0.0;  ///< -(1/(2p) - 1/4)
  std::size_t points = 0;
};

/// Uses records with finite positive error; needs at least three.
RateFit fit_rate(std::span<const ConvergenceRecord> records);

inline constexpr std::string_view kCsvHeader = "theta,c,p,s,alpha,lambda,weights,n,error,seconds,status";

std::string csv_row(const ConvergenceRecord& r);
void write_csv(std::span<const ConvergenceRecord> records, const std::filesystem::path& path);

/// "16,32,64": strictly increasing powers of two, each >= 2.
std::vector<std::uint32_t> parse_n_list(std::string_view text);

/// Builds a config from a JSON document with keys theta, c_over_sqrt6, p, s, weights,
/// n, mesh_exponent, L, seed, sobol_path, vector_cache, out. Missing keys keep defaults.
ExperimentConfig config_from_json(std::string_view json_text, ExperimentConfig base = {});

}  // namespace lki
