#include "lki/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "lki/errors.hpp"
#include "lki/sobol.hpp"

namespace lki {

std::string_view variant_name(WeightVariant v) noexcept {
  switch (v) {
    case WeightVariant::spod:
      return "spod";
    case WeightVariant::product:
      return "product";
    default:
      return "serendipitous";
  }
}

WeightVariant parse_weight_variant(std::string_view name) {
  if (name == "spod") return WeightVariant::spod;
  if (name == "serendipitous") return WeightVariant::serendipitous;
  if (name == "product") return WeightVariant::product;
  throw ConfigError("unknown weight variant '" + std::string(name) +
                    "'; expected spod, serendipitous or product");
}

WeightScheme make_weights(WeightVariant variant, const DerivedParams& derived) {
  switch (variant) {
    case WeightVariant::spod:
      return spod_weights(derived);
    case WeightVariant::product:
      return ProductWeights{derived.b};
    default:
      return serendipitous_weights(derived);
  }
}

void ExperimentConfig::validate() const {
  if (n_list.empty()) throw ConfigError("n list is empty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 2) throw ConfigError("every n must be at least 2");
    if (i > 0 && n_list[i] <= n_list[i - 1]) throw ConfigError("n list must be strictly increasing");
  }
  if (L == 0) throw ConfigError("L must be positive");
  if (params.s == 0) throw ConfigError("s must be positive");
}

std::vector<double> eval_points(const ExperimentConfig& cfg) {
  const std::size_t s = cfg.params.s;
  if (cfg.eval.kind == EvalSource::Kind::sobol) {
    return SobolSequence::from_file(cfg.eval.sobol_path, s).points(cfg.L, 1);
  }
  std::mt19937_64 rng(cfg.eval.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> pts(cfg.L * s);
  for (double& v : pts) v = unif(rng);
  return pts;
}

namespace {

std::string cache_name(const ExperimentConfig& cfg, std::uint32_t n) {
  std::ostringstream name;
  name << std::setprecision(17) << variant_name(cfg.weights) << "_theta" << cfg.params.theta << "_c" << cfg.params.c << "_p"
       << cfg.params.p << "_s" << cfg.params.s << "_n" << n;
  if (cfg.cbc.order_weighted) name << "_ow";
  if (cfg.cbc.lambda_power) name << "_lp";
  name << ".txt";
  return name.str();
}

}  // namespace

GeneratingVector obtain_vector(const ExperimentConfig& cfg, std::uint32_t n, SmoothnessOrder alpha,
                               const WeightScheme& scheme) {
  std::optional<std::filesystem::path> file;
  if (cfg.vector_cache) {
    file = *cfg.vector_cache / cache_name(cfg, n);
    if (std::filesystem::exists(*file)) {
      GeneratingVector gv = load_vector(*file);
      if (gv.n() == n && gv.s() == cfg.params.s) return gv;
    }
  }
  GeneratingVector gv = cbc_construct(n, cfg.params.s, alpha, scheme, cfg.cbc);
  if (file) {
    std::filesystem::create_directories(file->parent_path());
    save_vector(gv, *file);
  }
  return gv;
}

std::vector<double> lattice_solutions(const FemSolver& solver, const GeneratingVector& gv) {
  const std::size_t n = gv.n();
  const std::size_t s = gv.s();
  std::vector<double> nodes(n * s);
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t j = 0; j < s; ++j) nodes[(k - 1) * s + j] = gv.coordinate(k, j);
  }
  return solver.solve_batch(nodes, n, s);
}

double estimate_error(const FemSolver& solver, const VectorInterpolant& interp,
                      std::span<const double> points, std::size_t L) {
  const std::size_t n = interp.system().n();
  const std::size_t m = interp.components();
  if (m != solver.unknowns()) throw ConfigError("interpolant does not match the finite element mesh");
  if (L == 0 || points.size() % L != 0) throw ConfigError("evaluation point matrix is not L x s");
  const std::size_t s = points.size() / L;
  if (s != solver.dimension()) throw ConfigError("evaluation points do not match field dimension");

  // The lattice is recovered from the interpolant's nodes through y + t_k.
  double total = 0.0;
  std::vector<double> shifted(n * s);
  std::vector<double> diff(m);
  for (std::size_t l = 0; l < L; ++l) {
    const auto y = points.subspan(l * s, s);
    const std::vector<double> approx = interp.evaluate_shifted(y);
    for (std::size_t k = 1; k <= n; ++k) {
      for (std::size_t j = 0; j < s; ++j) {
        shifted[(k - 1) * s + j] = specfun::frac(y[j] + interp.lattice().coordinate(k, j));
      }
    }
    const std::vector<double> exact = solver.solve_batch(shifted, n, s);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < m; ++i) diff[i] = exact[k * m + i] - approx[k * m + i];
      total += solver.mass_inner(diff, diff);
    }
  }
  return std::sqrt(total / static_cast<double>(L * n));
}

std::string csv_row(const ConvergenceRecord& r) {
  std::ostringstream out;
  out << std::setprecision(17) << r.theta << ',' << r.c << ',' << r.p << ',' << r.s << ','
      << r.alpha << ',' << r.lambda << ',' << r.weights << ',' << r.n << ',';
  if (std::isnan(r.error)) {
    out << "NaN";
  } else {
    out << r.error;
  }
  std::string status = r.status;
  for (char& ch : status) {
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  }
  out << ',' << std::setprecision(6) << r.seconds << ',' << status;
  return out.str();
}

void write_csv(std::span<const ConvergenceRecord> records, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << kCsvHeader << '\n';
  for (const auto& r : records) out << csv_row(r) << '\n';
}

std::vector<ConvergenceRecord> run_convergence(const ExperimentConfig& cfg, std::ostream* log) {
  cfg.validate();
  const FieldSpec field(cfg.params);
  const DerivedParams& derived = field.derived();
  const WeightScheme scheme = make_weights(cfg.weights, derived);
  FemProblem problem;
  problem.mesh_exponent = cfg.mesh_exponent;
  const FemSolver solver(problem, field);
  const std::vector<double> points = eval_points(cfg);

  std::ofstream csv;
  if (cfg.output_path) {
    if (cfg.output_path->has_parent_path()) std::filesystem::create_directories(cfg.output_path->parent_path());
    csv.open(*cfg.output_path);
    if (!csv) throw Error("cannot open '" + cfg.output_path->string() + "' for writing");
    csv << kCsvHeader << '\n' << std::flush;
  }

  std::vector<ConvergenceRecord> records;
  for (std::uint32_t n : cfg.n_list) {
    ConvergenceRecord rec{cfg.params.theta, cfg.params.c, cfg.params.p, cfg.params.s,
                          derived.alpha.value(), derived.lambda, std::string(variant_name(cfg.weights)),
                          n, NAN, 0.0, "ok"};
    const auto start = std::chrono::steady_clock::now();
    try {
      const GeneratingVector gv = obtain_vector(cfg, n, derived.alpha, scheme);
      const KernelSpec spec(derived.alpha, scheme, cfg.params.s);
      const std::vector<double> values = lattice_solutions(solver, gv);
      const VectorInterpolant interp(spec, gv, values, solver.unknowns());
      rec.error = estimate_error(solver, interp, points, cfg.L);
    } catch (const Error& e) {
      rec.error = NAN;
      rec.status = std::string("failed: ") + e.what();
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (log) *log << csv_row(rec) << std::endl;
    if (csv.is_open()) csv << csv_row(rec) << '\n' << std::flush;
    records.push_back(std::move(rec));
  }
  return records;
}

RateFit fit_rate(std::span<const ConvergenceRecord> records) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t count = 0;
  double p = 0.0;
  for (const auto& r : records) {
    if (!(std::isfinite(r.error) && r.error > 0.0)) continue;
    const double x = std::log(static_cast<double>(r.n));
    const double y = std::log(r.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    p = r.p;
    ++count;
  }
  if (count < 3) throw DomainError("rate fit needs at least three records with positive error");
  const double c = static_cast<double>(count);
  RateFit fit;
  fit.points = count;
  fit.slope = (c * sxy - sx * sy) / (c * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / c;
  fit.theoretical = p > 0.0 ? -(1.0 / (2.0 * p) - 0.25) : NAN;
  return fit;
}

std::vector<std::uint32_t> parse_n_list(std::string_view text) {
  std::vector<std::uint32_t> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw ConfigError("empty entry in n list");
    item = item.substr(first, last - first + 1);
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("n list entry '" + item + "' is not an integer");
    }
    if (used != item.size() || v < 2 || v > (1ULL << 31) || (v & (v - 1)) != 0) {
      throw ConfigError("n list entry '" + item + "' is not a power of two >= 2");
    }
    out.push_back(static_cast<std::uint32_t>(v));
  }
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i] <= out[i - 1]) throw ConfigError("n list must be strictly increasing");
  }
  if (out.empty()) throw ConfigError("n list is empty");
  return out;
}

ExperimentConfig config_from_json(std::string_view json_text, ExperimentConfig base) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON config: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("JSON config must be an object");
  try {
    if (doc.contains("theta")) base.params.theta = doc["theta"].get<double>();
    if (doc.contains("c_over_sqrt6")) base.params.c = doc["c_over_sqrt6"].get<double>() / std::sqrt(6.0);
    if (doc.contains("p")) base.params.p = doc["p"].get<double>();
    if (doc.contains("s")) base.params.s = doc["s"].get<std::size_t>();
    if (doc.contains("weights")) base.weights = parse_weight_variant(doc["weights"].get<std::string>());
    if (doc.contains("n")) {
      const auto& n = doc["n"];
      if (n.is_string()) {
        base.n_list = parse_n_list(n.get<std::string>());
      } else {
        std::string joined;
        for (const auto& v : n) joined += (joined.empty() ? "" : ",") + std::to_string(v.get<std::uint64_t>());
        base.n_list = parse_n_list(joined);
      }
    }
    if (doc.contains("mesh_exponent")) base.mesh_exponent = doc["mesh_exponent"].get<int>();
    if (doc.contains("L")) base.L = doc["L"].get<std::size_t>();
    if (doc.contains("seed")) base.eval.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("sobol_path")) {
      base.eval.kind = EvalSource::Kind::sobol;
      base.eval.sobol_path = doc["sobol_path"].get<std::string>();
    }
    if (doc.contains("vector_cache")) base.vector_cache = doc["vector_cache"].get<std::string>();
    if (doc.contains("out")) base.output_path = doc["out"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad value in JSON config: ") + e.what());
  }
  return base;
}

}  // namespace lki
