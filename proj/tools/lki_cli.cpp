#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lki/errors.hpp"
#include "lki/experiment.hpp"
#include "lki/fem.hpp"
#include "lki/field.hpp"
#include "lki/lattice.hpp"
#include "lki/oracles.hpp"

namespace {

using namespace lki;

// Flags shared by cbc and convergence. Unset flags fall back to the config file,
// then to the built-in defaults.
struct ProblemFlags {
  std::string config;
  std::optional<double> theta, c_over_sqrt6, p;
  std::optional<std::size_t> s;
  std::optional<std::string> weights, n, sobol_path, vector_cache, out;
  std::optional<int> mesh_exponent;
  std::optional<std::size_t> L;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "JSON config file; flags given here override it")
        ->check(CLI::ExistingFile);
    app->add_option("--theta", theta, "decay rate of the field expansion");
    app->add_option("--c_over_sqrt6,--c-over-sqrt6", c_over_sqrt6, "fluctuation magnitude times sqrt(6)");
    app->add_option("--p", p, "summability exponent");
    app->add_option("--s", s, "truncation dimension");
    app->add_option("--weights", weights, "spod, serendipitous or product");
    app->add_option("--n", n, "comma-separated lattice sizes, powers of two");
    app->add_option("--mesh_exponent,--mesh-exponent", mesh_exponent, "finite element mesh h = 2^-m");
    app->add_option("--L", L, "number of evaluation shifts");
    app->add_option("--seed", seed, "seed for uniform evaluation points");
    app->add_option("--sobol_path,--sobol-path", sobol_path, "Sobol direction numbers; use Sobol shifts");
    app->add_option("--vector_cache,--vector-cache", vector_cache, "directory for generating vectors");
    app->add_option("--out", out, "output file");
  }

  ExperimentConfig resolve() const {
    ExperimentConfig cfg;
    cfg.params = {3.6, 0.2 / std::sqrt(6.0), 1.0 / 3.3, 10};
    cfg.n_list = {16, 32, 64, 128};
    if (!config.empty()) {
      std::ifstream in(config);
      std::stringstream text;
      text << in.rdbuf();
      cfg = config_from_json(text.str(), cfg);
    }
    if (theta) cfg.params.theta = *theta;
    if (c_over_sqrt6) cfg.params.c = *c_over_sqrt6 / std::sqrt(6.0);
    if (p) cfg.params.p = *p;
    if (s) cfg.params.s = *s;
    if (weights) cfg.weights = parse_weight_variant(*weights);
    if (n) cfg.n_list = parse_n_list(*n);
    if (mesh_exponent) cfg.mesh_exponent = *mesh_exponent;
    if (L) cfg.L = *L;
    if (seed) cfg.eval.seed = *seed;
    if (sobol_path) {
      cfg.eval.kind = EvalSource::Kind::sobol;
      cfg.eval.sobol_path = *sobol_path;
    }
    if (vector_cache) cfg.vector_cache = *vector_cache;
    if (out) cfg.output_path = *out;
    cfg.validate();
    return cfg;
  }
};

int run_cbc(const ProblemFlags& flags, bool order_weighted, bool lambda_power) {
  ExperimentConfig cfg = flags.resolve();
  cfg.cbc.order_weighted = order_weighted;
  cfg.cbc.lambda_power = lambda_power;
  const DerivedParams d = derive_params(cfg.params);
  cfg.cbc.lambda = d.lambda;
  const WeightScheme scheme = make_weights(cfg.weights, d);
  if (cfg.output_path && cfg.n_list.size() != 1) {
    throw ConfigError("--out writes a single vector; give exactly one n");
  }
  for (std::uint32_t n : cfg.n_list) {
    const GeneratingVector gv = obtain_vector(cfg, n, d.alpha, scheme);
    if (cfg.output_path) {
      save_vector(gv, *cfg.output_path);
    } else {
      std::cout << gv.n() << ' ' << gv.s() << '\n';
      for (std::size_t j = 0; j < gv.s(); ++j) std::cout << (j ? " " : "") << gv.z()[j];
      std::cout << '\n';
    }
  }
  return 0;
}

int run_convergence_cmd(const ProblemFlags& flags) {
  const ExperimentConfig cfg = flags.resolve();
  const auto records = run_convergence(cfg, &std::cerr);
  if (!cfg.output_path) {
    std::cout << kCsvHeader << '\n';
    for (const auto& r : records) std::cout << csv_row(r) << '\n';
  }
  bool all_ok = true;
  for (const auto& r : records) all_ok = all_ok && r.status == "ok";
  try {
    const RateFit fit = fit_rate(records);
    std::cerr << "fitted slope " << fit.slope << " over " << fit.points << " points, theoretical "
              << fit.theoretical << '\n';
  } catch (const DomainError&) {
    std::cerr << "fewer than three successful rows; no rate fitted\n";
  }
  return all_ok ? 0 : 3;
}

int run_transform_check(std::size_t samples, std::uint64_t seed) {
  const double d = transform_cdf_distance(samples, seed);
  const bool ok = d < 0.01;
  std::cout << "sup |F_emp - F_arcsine| = " << d << " over " << samples << " samples: "
            << (ok ? "ok" : "too large") << '\n';
  return ok ? 0 : 1;
}

int run_fem_check(int m_min, int m_max) {
  if (m_min < 1 || m_max <= m_min) throw ConfigError("need 1 <= m_min < m_max");
  const double pi = std::acos(-1.0);
  auto exact = [pi](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); };
  std::optional<double> previous;
  bool ok = true;
  std::cout << "m  h          L2 error      ratio\n";
  for (int m = m_min; m <= m_max; ++m) {
    FemProblem prob;
    prob.mesh_exponent = m;
    prob.source = [pi, exact](double x, double y) { return 2.0 * pi * pi * exact(x, y); };
    const FemSolver solver(prob);
    auto u = solver.solve_coefficients({}).values;
    const auto ref = solver.interpolate(exact);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] -= ref[i];
    const double err = std::sqrt(solver.mass_inner(u, u));
    std::cout << std::left << std::setw(3) << m << std::setw(11) << std::ldexp(1.0, -m)
              << std::setw(14) << err;
    if (previous) {
      const double ratio = *previous / err;
      ok = ok && ratio >= 3.5 && ratio <= 4.5;
      std::cout << ratio;
    }
    std::cout << '\n';
    previous = err;
  }
  return ok ? 0 : 1;
}

int run_kernel_check() {
  bool ok = true;
  for (const auto& r : oracle::run_kernel_checks()) {
    std::cout << (r.passed ? "ok    " : "FAIL  ") << r.name << ": " << r.detail << '\n';
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice-based kernel interpolation for a parametric elliptic problem"};
  app.require_subcommand(1);

  ProblemFlags cbc_flags;
  bool order_weighted = false;
  bool lambda_power = false;
  auto* cbc = app.add_subcommand("cbc", "construct generating vectors component by component");
  cbc_flags.attach(cbc);
  cbc->add_flag("--order-weighted", order_weighted, "weight subsets by max(|u|, 1) (product weights)");
  cbc->add_flag("--lambda-power", lambda_power, "search with gamma^lambda (product weights)");

  ProblemFlags conv_flags;
  auto* conv = app.add_subcommand("convergence", "interpolation error against n, written as CSV");
  conv_flags.attach(conv);

  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  auto* transform = app.add_subcommand("transform-check", "distribution of sin(2 pi U) against the arcsine law");
  transform->add_option("--samples", samples, "number of samples")->capture_default_str();
  transform->add_option("--seed", seed, "random seed")->capture_default_str();

  int m_min = 2, m_max = 6;
  auto* fem = app.add_subcommand("fem-check", "finite element convergence on a manufactured solution");
  fem->add_option("--m-min", m_min, "coarsest mesh exponent")->capture_default_str();
  fem->add_option("--m-max", m_max, "finest mesh exponent")->capture_default_str();

  auto* kernel = app.add_subcommand("kernel-check", "kernel, solver and weight oracles");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cbc->parsed()) return run_cbc(cbc_flags, order_weighted, lambda_power);
    if (conv->parsed()) return run_convergence_cmd(conv_flags);
    if (transform->parsed()) return run_transform_check(samples, seed);
    if (fem->parsed()) return run_fem_check(m_min, m_max);
    if (kernel->parsed()) return run_kernel_check();
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
