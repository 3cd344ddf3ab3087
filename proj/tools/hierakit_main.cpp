#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "hierakit/suites.hpp"
#include "hierakit/tensor_core.hpp"

namespace {

using hierakit::CsvTable;
using hierakit::ExperimentConfig;
using hierakit::Report;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> tol_overrides;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool parallel = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "JSON configuration file");
  cmd->add_option("--out", opts.out_dir, "output directory for reports and CSV data");
  cmd->add_option("--tol", opts.tol_overrides, "tolerance override name=value (repeatable)");
  cmd->add_option("--seed", opts.seed, "random seed")->each([&](const std::string&) {
    opts.seed_set = true;
  });
  cmd->add_flag("--parallel", opts.parallel, "run independent checks concurrently");
}

ExperimentConfig load_config(const CommonOpts& opts) {
  ExperimentConfig cfg = opts.config_path.empty()
                             ? ExperimentConfig{}
                             : ExperimentConfig::from_file(opts.config_path);
  if (opts.seed_set) cfg.seed = opts.seed;
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  if (opts.parallel) cfg.parallel = true;
  for (const auto& ov : opts.tol_overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--tol expects name=value, got '" + ov + "'");
    cfg.tolerances[ov.substr(0, eq)] = std::stod(ov.substr(eq + 1));
  }
  return cfg;
}

int finish(const Report& rep, const ExperimentConfig& cfg, const CsvTable* csv,
           const std::string& csv_name) {
  rep.print(std::cout);
  if (!cfg.out_dir.empty()) {
    hierakit::write_report_files(rep, cfg.out_dir);
    if (csv) hierakit::write_text_file(cfg.out_dir + "/" + csv_name, csv->to_string());
  } else if (csv) {
    std::cout << csv->to_string();
  }
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hierakit: verification suites for many-body hierarchy structures"};
  app.require_subcommand(1);

  const std::map<std::string, std::string> descriptions = {
      {"verify_algebra",
       "bracket laws, embedding homomorphism, Poisson-bracket laws, vector-field "
       "duality, derivative oracles"},
      {"converge_bracket",
       "distance between the N-particle and limiting brackets over a sweep of N, "
       "with a log-log slope fit (CSV: N,k,norm_diff)"},
      {"flow_equivalence",
       "Hamiltonian vector fields against the coupled reduced-density right-hand "
       "sides, plus the worked coefficient identities"},
      {"morphism",
       "Poisson-map identities of the three embeddings and the energy pullback"},
      {"commuting_diagram",
       "integrate-then-reduce against reduce-then-integrate, with an integrator "
       "order fit (CSV: t,k,diff_norm)"},
      {"nls_gp",
       "split-step conservation laws and the factorized-trajectory residual decay "
       "(CSV: t,mass_drift,energy_drift,gp_residual)"}};

  std::map<std::string, CommonOpts> opts;
  for (const auto& [name, description] : descriptions) {
    auto* cmd = app.add_subcommand(name, description);
    add_common(cmd, opts[name]);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    const ExperimentConfig cfg = load_config(opts[name]);
    if (name == "verify_algebra") return finish(hierakit::cmd_verify_algebra(cfg), cfg, nullptr, "");
    if (name == "converge_bracket") {
      CsvTable csv;
      const Report rep = hierakit::cmd_converge_bracket(cfg, &csv);
      return finish(rep, cfg, &csv, "converge_bracket.csv");
    }
    if (name == "flow_equivalence")
      return finish(hierakit::cmd_flow_equivalence(cfg), cfg, nullptr, "");
    if (name == "morphism") return finish(hierakit::cmd_morphism(cfg), cfg, nullptr, "");
    if (name == "commuting_diagram") {
      CsvTable csv;
      const Report rep = hierakit::cmd_commuting_diagram(cfg, &csv);
      return finish(rep, cfg, &csv, "commuting_diagram.csv");
    }
    if (name == "nls_gp") {
      CsvTable csv;
      const Report rep = hierakit::cmd_nls_gp(cfg, &csv);
      return finish(rep, cfg, &csv, "nls_gp.csv");
    }
    std::fprintf(stderr, "unknown command\n");
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "hierakit: %s\n", e.what());
    return 2;
  }
}
