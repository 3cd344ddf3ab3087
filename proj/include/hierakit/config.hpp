#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace hierakit {

// Experiment configuration; parsed strictly (unknown keys rejected).
struct ModelConfig {
  int n = 8;
  double length = 2.0 * 3.14159265358979323846;
  int n_particles = 3;
  int kappa = 1;  // +1 or -1
  double beta = 0.5;
  int depth = 3;  // hierarchy depth K
};

struct FlowBlockConfig {
  double dt = 1e-3;
  double t_final = 0.5;
  std::string method = "rk4";  // rk4 | exact-exponential | strang-split
  int record_every = 50;
};

struct ExperimentConfig {
  ModelConfig model;
  FlowBlockConfig flow;
  std::string suite;
  std::uint64_t seed = 1;
  std::string out_dir;
  std::map<std::string, double> tolerances;
  std::vector<int> sweep = {8, 16, 32, 64};  // particle numbers for convergence runs
  double corrupt_coefficient = 0.0;          // test hook for the negative control
  bool parallel = false;

  double tol(const std::string& name, double fallback) const;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_file(const std::string& path);
};

}  // namespace hierakit
