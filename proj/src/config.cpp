#include "hierakit/config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>
#include <stdexcept>

namespace hierakit {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

double ExperimentConfig::tol(const std::string& name, double fallback) const {
  auto it = tolerances.find(name);
  return it == tolerances.end() ? fallback : it->second;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  reject_unknown(j, {"model", "flow", "suite", "seed", "out", "tolerances", "sweep",
                     "corrupt_coefficient", "parallel"},
                 "top level");
  if (j.contains("model")) {
    const json& m = j.at("model");
    reject_unknown(m, {"n", "L", "N", "kappa", "beta", "K"}, "model");
    read(m, "n", cfg.model.n);
    read(m, "L", cfg.model.length);
    read(m, "N", cfg.model.n_particles);
    read(m, "kappa", cfg.model.kappa);
    read(m, "beta", cfg.model.beta);
    read(m, "K", cfg.model.depth);
  }
  if (j.contains("flow")) {
    const json& f = j.at("flow");
    reject_unknown(f, {"dt", "T", "method", "record_every"}, "flow");
    read(f, "dt", cfg.flow.dt);
    read(f, "T", cfg.flow.t_final);
    read(f, "method", cfg.flow.method);
    read(f, "record_every", cfg.flow.record_every);
  }
  read(j, "suite", cfg.suite);
  read(j, "seed", cfg.seed);
  read(j, "out", cfg.out_dir);
  if (j.contains("tolerances")) {
    for (auto it = j.at("tolerances").begin(); it != j.at("tolerances").end(); ++it)
      cfg.tolerances[it.key()] = it.value().get<double>();
  }
  if (j.contains("sweep")) cfg.sweep = j.at("sweep").get<std::vector<int>>();
  read(j, "corrupt_coefficient", cfg.corrupt_coefficient);
  read(j, "parallel", cfg.parallel);

  if (cfg.model.kappa != 1 && cfg.model.kappa != -1)
    throw std::invalid_argument("config: kappa must be +1 or -1");
  if (cfg.model.beta <= 0.0 || cfg.model.beta >= 1.0)
    throw std::invalid_argument("config: beta must lie in (0,1)");
  if (cfg.model.n < 4) throw std::invalid_argument("config: n must be >= 4");
  if (cfg.sweep.empty()) throw std::invalid_argument("config: sweep must be nonempty");
  if (cfg.flow.method != "rk4" && cfg.flow.method != "exact-exponential" &&
      cfg.flow.method != "strang-split")
    throw std::invalid_argument("config: unknown flow method '" + cfg.flow.method + "'");
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  nlohmann::json j;
  in >> j;
  return from_json(j);
}

}  // namespace hierakit
