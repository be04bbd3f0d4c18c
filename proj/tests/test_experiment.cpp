#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "lki/errors.hpp"
#include "lki/experiment.hpp"

using namespace lki;
using doctest::Approx;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.params = {3.6, 0.2 / std::sqrt(6.0), 1.0 / 3.3, 3};
  cfg.n_list = {4, 8};
  cfg.mesh_exponent = 3;
  cfg.L = 2;
  cfg.eval.seed = 7;
  return cfg;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("lki_exp_" + name);
}

}  // namespace

TEST_SUITE("experiment") {
  TEST_CASE("weight variant names") {
    CHECK(parse_weight_variant("spod") == WeightVariant::spod);
    CHECK(parse_weight_variant("serendipitous") == WeightVariant::serendipitous);
    CHECK(parse_weight_variant("product") == WeightVariant::product);
    CHECK(variant_name(WeightVariant::spod) == "spod");
    CHECK_THROWS_AS(parse_weight_variant("pod"), ConfigError);
    const auto d = derive_params({3.6, 0.1, 0.5, 3});
    const auto w = make_weights(WeightVariant::product, d);
    const auto g = product_factors(w);
    for (std::size_t j = 0; j < 3; ++j) CHECK(g[j] == d.b[j]);
  }

  TEST_CASE("n list parsing") {
    CHECK(parse_n_list("16,32,64") == std::vector<std::uint32_t>{16, 32, 64});
    CHECK(parse_n_list(" 2 , 4") == std::vector<std::uint32_t>{2, 4});
    CHECK_THROWS_AS(parse_n_list("16,24"), ConfigError);
    CHECK_THROWS_AS(parse_n_list("32,16"), ConfigError);
    CHECK_THROWS_AS(parse_n_list("1"), ConfigError);
    CHECK_THROWS_AS(parse_n_list(""), ConfigError);
    CHECK_THROWS_AS(parse_n_list("16,,32"), ConfigError);
    CHECK_THROWS_AS(parse_n_list("abc"), ConfigError);
  }

  TEST_CASE("CSV header and rows") {
    CHECK(kCsvHeader == "theta,c,p,s,alpha,lambda,weights,n,error,seconds,status");
    ConvergenceRecord r;
    r.theta = 2.4;
    r.c = 0.5;
    r.p = 0.5;
    r.s = 10;
    r.alpha = 2;
    r.lambda = 1.0 / 3.0;
    r.weights = "spod";
    r.n = 256;
    r.error = std::numeric_limits<double>::quiet_NaN();
    r.seconds = 1.5;
    r.status = "failed: ill-conditioned, ratio 1e-15";
    const std::string row = csv_row(r);
    std::vector<std::string> fields;
    std::stringstream ss(row);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    REQUIRE(fields.size() == 11);
    CHECK(fields[6] == "spod");
    CHECK(fields[7] == "256");
    CHECK(fields[8] == "NaN");
    CHECK(fields[10].rfind("failed:", 0) == 0);
    CHECK(std::stod(fields[5]) == r.lambda);

    const auto path = temp_path("rows.csv");
    write_csv(std::vector<ConvergenceRecord>{r, r}, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == kCsvHeader);
    std::filesystem::remove(path);
  }

  TEST_CASE("rate fit") {
    std::vector<ConvergenceRecord> recs;
    for (std::uint32_t n : {16u, 32u, 64u, 128u}) {
      ConvergenceRecord r;
      r.p = 1.0 / 3.3;
      r.n = n;
      r.error = 3.0 * std::pow(double(n), -1.5);
      recs.push_back(r);
    }
    ConvergenceRecord failed = recs.back();
    failed.n = 256;
    failed.error = std::numeric_limits<double>::quiet_NaN();
    recs.push_back(failed);
    const auto fit = fit_rate(recs);
    CHECK(fit.points == 4);
    CHECK(fit.slope == Approx(-1.5).epsilon(1e-12));
    CHECK(std::exp(fit.intercept) == Approx(3.0).epsilon(1e-10));
    CHECK(fit.theoretical == Approx(-(3.3 / 2.0 - 0.25)).epsilon(1e-12));
    recs.resize(2);
    CHECK_THROWS_AS(fit_rate(recs), DomainError);
  }

  TEST_CASE("config validation and JSON") {
    auto cfg = small_config();
    CHECK_NOTHROW(cfg.validate());
    cfg.L = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = small_config();
    cfg.n_list = {8, 4};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    const auto j = config_from_json(
        R"({"theta": 2.4, "c_over_sqrt6": 1.5, "p": 0.45, "s": 10, "weights": "spod",
            "n": [16, 32, 64], "mesh_exponent": 4, "L": 20, "seed": 99,
            "vector_cache": "/tmp/vc", "out": "/tmp/out.csv"})");
    CHECK(j.params.theta == 2.4);
    CHECK(j.params.c == Approx(1.5 / std::sqrt(6.0)));
    CHECK(j.params.p == 0.45);
    CHECK(j.params.s == 10);
    CHECK(j.weights == WeightVariant::spod);
    CHECK(j.n_list == std::vector<std::uint32_t>{16, 32, 64});
    CHECK(j.mesh_exponent == 4);
    CHECK(j.L == 20);
    CHECK(j.eval.seed == 99);
    CHECK(j.eval.kind == EvalSource::Kind::seeded_uniform);
    CHECK(j.vector_cache->string() == "/tmp/vc");
    CHECK(j.output_path->string() == "/tmp/out.csv");

    const auto k = config_from_json(R"({"n": "4,8", "sobol_path": "dirs.txt"})", j);
    CHECK(k.n_list == std::vector<std::uint32_t>{4, 8});
    CHECK(k.eval.kind == EvalSource::Kind::sobol);
    CHECK(k.params.theta == 2.4);

    CHECK_THROWS_AS(config_from_json("{", {}), ConfigError);
    CHECK_THROWS_AS(config_from_json("[1,2]", {}), ConfigError);
    CHECK_THROWS_AS(config_from_json(R"({"s": "ten"})", {}), ConfigError);
    CHECK_THROWS_AS(config_from_json(R"({"weights": "pod"})", {}), ConfigError);
  }

  TEST_CASE("evaluation points") {
    auto cfg = small_config();
    const auto a = eval_points(cfg);
    CHECK(a.size() == cfg.L * cfg.params.s);
    CHECK(a == eval_points(cfg));
    for (double v : a) {
      CHECK(v >= 0.0);
      CHECK(v < 1.0);
    }
    cfg.eval.kind = EvalSource::Kind::sobol;
    cfg.eval.sobol_path = LKI_DATA_DIR "/new-joe-kuo-6.1000.txt";
    const auto s = eval_points(cfg);
    CHECK(s[0] == 0.5);
    CHECK(s[3] == 0.75);
    CHECK(s[4] == 0.25);
  }

  TEST_CASE("error estimate vanishes on the lattice itself") {
    auto cfg = small_config();
    const auto d = derive_params(cfg.params);
    const auto w = make_weights(WeightVariant::serendipitous, d);
    FemProblem prob;
    prob.mesh_exponent = 3;
    const FemSolver solver(prob, FieldSpec(cfg.params));
    const KernelSpec spec(d.alpha, w, cfg.params.s);
    const auto gv = obtain_vector(cfg, 16, d.alpha, w);
    const auto values = lattice_solutions(solver, gv);
    const VectorInterpolant interp(spec, gv, values, solver.unknowns());
    const std::vector<double> origin(2 * cfg.params.s, 0.0);
    CHECK(estimate_error(solver, interp, origin, 2) <= 1e-9);
    const std::vector<double> off{0.3, 0.1, 0.7, 0.55, 0.2, 0.05};
    CHECK(estimate_error(solver, interp, off, 2) > 1e-9);
  }

  TEST_CASE("generating vector cache") {
    auto cfg = small_config();
    const auto dir = temp_path("cache");
    std::filesystem::remove_all(dir);
    cfg.vector_cache = dir;
    const auto d = derive_params(cfg.params);
    const auto w = make_weights(WeightVariant::serendipitous, d);
    const auto first = obtain_vector(cfg, 32, d.alpha, w);
    CHECK(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator{}) == 1);
    CHECK(obtain_vector(cfg, 32, d.alpha, w) == first);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("small convergence run writes a CSV") {
    auto cfg = small_config();
    const auto out = temp_path("run.csv");
    cfg.output_path = out;
    const auto recs = run_convergence(cfg);
    REQUIRE(recs.size() == 2);
    for (const auto& r : recs) {
      CHECK(r.status == "ok");
      CHECK(std::isfinite(r.error));
      CHECK(r.error > 0.0);
      CHECK(r.alpha == 3);
      CHECK(r.weights == "serendipitous");
    }
    std::ifstream in(out);
    std::string line;
    std::getline(in, line);
    CHECK(line == kCsvHeader);
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 2);
    std::filesystem::remove(out);
    // same seed, same numbers
    cfg.output_path.reset();
    const auto again = run_convergence(cfg);
    CHECK(again[0].error == recs[0].error);
    CHECK(again[1].error == recs[1].error);
  }

  TEST_CASE("conditioning failures become NaN rows") {
    auto cfg = small_config();
    cfg.params.s = 1;
    cfg.n_list = {8, 4096};
    const auto recs = run_convergence(cfg);
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].status == "ok");
    CHECK(std::isnan(recs[1].error));
    CHECK(recs[1].status.rfind("failed: kernel matrix", 0) == 0);
    CHECK(csv_row(recs[1]).find(",NaN,") != std::string::npos);
  }
}
