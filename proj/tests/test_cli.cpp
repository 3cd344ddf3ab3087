#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include "hierakit/config.hpp"
#include "hierakit/report.hpp"
#include "hierakit/suites.hpp"

using namespace hierakit;
using nlohmann::json;

TEST_CASE("configuration parsing is strict") {
  SUBCASE("a full valid config parses") {
    const json j = {{"model", {{"n", 8}, {"L", 6.0}, {"N", 3}, {"kappa", -1}, {"beta", 0.4},
                               {"K", 2}}},
                    {"flow", {{"dt", 1e-3}, {"T", 0.5}, {"method", "rk4"}, {"record_every", 10}}},
                    {"seed", 42},
                    {"out", "/tmp/out"},
                    {"tolerances", {{"morphism", 1e-7}}},
                    {"sweep", {8, 16}},
                    {"parallel", true}};
    const auto cfg = ExperimentConfig::from_json(j);
    CHECK(cfg.model.n == 8);
    CHECK(cfg.model.kappa == -1);
    CHECK(cfg.seed == 42);
    CHECK(cfg.tol("morphism", 1e-8) == 1e-7);
    CHECK(cfg.tol("missing", 1e-8) == 1e-8);
    CHECK(cfg.sweep == std::vector<int>{8, 16});
    CHECK(cfg.parallel);
  }
  SUBCASE("unknown keys are rejected") {
    CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"bogus", 1}}), std::invalid_argument);
    CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"model", {{"particles", 3}}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"flow", {{"steps", 10}}}}),
                    std::invalid_argument);
  }
  SUBCASE("invalid values are rejected") {
    CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"model", {{"kappa", 2}}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"model", {{"beta", 1.5}}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"flow", {{"method", "euler"}}}}),
                    std::invalid_argument);
  }
}

TEST_CASE("reports serialize with a schema version") {
  ExperimentConfig cfg;
  cfg.sweep = {8};
  CsvTable csv;
  const Report rep = cmd_converge_bracket(cfg, &csv);
  const json j = rep.to_json();
  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("suite") == "converge_bracket");
  CHECK(j.contains("environment"));
  CHECK(j.at("checks").is_array());
  // single-point sweeps report distances without fitting a slope
  bool has_fit = false;
  for (const auto& c : rep.checks) has_fit |= c.name.find("slope") != std::string::npos;
  CHECK_FALSE(has_fit);
  CHECK(csv.rows.front().at(0) == 8.0);
}

TEST_CASE("identical config and seed give byte-identical CSV output") {
  ExperimentConfig cfg;
  cfg.seed = 7;
  CsvTable a, b;
  (void)cmd_converge_bracket(cfg, &a);
  (void)cmd_converge_bracket(cfg, &b);
  CHECK(a.to_string() == b.to_string());
  CHECK(a.columns == std::vector<std::string>{"N", "k", "norm_diff"});

  ExperimentConfig other = cfg;
  other.seed = 8;
  CsvTable c;
  (void)cmd_converge_bracket(other, &c);
  CHECK(a.to_string() != c.to_string());
}

TEST_CASE("corrupted coefficient hook fails the named checks") {
  ExperimentConfig cfg;
  cfg.corrupt_coefficient = 1e-3;
  const Report rep = cmd_verify_algebra(cfg);
  CHECK_FALSE(rep.all_pass());
  bool antisym_failed = false, homomorphism_failed = false;
  for (const auto& c : rep.checks) {
    if (c.name == "bracket_n_antisymmetry") antisym_failed = !c.pass;
    if (c.name == "embedding_homomorphism") homomorphism_failed = !c.pass;
  }
  CHECK(antisym_failed);
  CHECK(homomorphism_failed);
}

TEST_CASE("parallel execution reproduces the sequential report") {
  ExperimentConfig cfg;
  cfg.sweep = {8, 16};
  const Report seq = cmd_converge_bracket(cfg);
  ExperimentConfig par = cfg;
  par.parallel = true;
  const Report conc = cmd_converge_bracket(par);
  REQUIRE(seq.checks.size() == conc.checks.size());
  for (std::size_t i = 0; i < seq.checks.size(); ++i) {
    CHECK(seq.checks[i].name == conc.checks[i].name);
    CHECK(seq.checks[i].value == conc.checks[i].value);
    CHECK(seq.checks[i].pass == conc.checks[i].pass);
  }
}

TEST_CASE("csv formatting is fixed-format") {
  CsvTable t;
  t.columns = {"a", "b"};
  t.rows = {{1.0, 0.5}, {2.0, 1.0 / 3.0}};
  CHECK(t.to_string() == "a,b\n1,0.5\n2,0.33333333333333331\n");
}
