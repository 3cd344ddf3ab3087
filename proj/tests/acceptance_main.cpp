// Acceptance gate: runs every shipped criterion at its pinned parameters and
// tolerance, printing one PASS/FAIL line per criterion.  Exit code 0 only if
// all criteria hold.

#include <chrono>
#include <future>
#include <cstdio>
#include <string>
#include <vector>

#include "hierakit/functional_algebra.hpp"
#include "hierakit/random.hpp"
#include "hierakit/suites.hpp"

namespace {

using namespace hierakit;

struct Criterion {
  std::string id;
  std::string label;
  bool pass = false;
  std::string detail;
};

std::vector<Criterion> results;

void record(const std::string& id, const std::string& label, bool pass,
            const std::string& detail) {
  results.push_back({id, label, pass, detail});
}

bool runtime_ok(double seconds, double budget) { return seconds < budget; }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// collect the named checks of a report; pass iff all named checks pass
bool checks_pass(const Report& rep, const std::vector<std::string>& names, std::string& detail) {
  bool ok = true;
  detail.clear();
  for (const auto& c : rep.checks) {
    bool wanted = false;
    for (const auto& n : names) wanted |= c.name.find(n) == 0;
    if (!wanted) continue;
    ok &= c.pass;
    if (!detail.empty()) detail += ", ";
    detail += c.name + "=" + fmt(c.value);
  }
  return ok;
}

}  // namespace

int main() {
  ExperimentConfig cfg;  // shipped defaults; seed 1
  std::string detail;

  // --- algebra suite backs P1, P2 and P10 ---------------------------------
  const Report algebra = cmd_verify_algebra(cfg);
  {
    bool ok = checks_pass(algebra,
                          {"bracket_n_antisymmetry", "bracket_n_jacobi",
                           "bracket_inf_antisymmetry", "bracket_inf_jacobi"},
                          detail);
    ok &= runtime_ok(algebra.runtime_seconds, 30.0);
    record("P1", "Lie algebra laws (N-body and limiting brackets)", ok,
           detail + "; runtime " + fmt(algebra.runtime_seconds) + "s < 30s");
  }
  {
    bool ok = checks_pass(algebra, {"embedding_homomorphism"}, detail);
    ok &= runtime_ok(algebra.runtime_seconds, 10.0);
    record("P2", "embedding intertwines the brackets", ok,
           detail + "; runtime " + fmt(algebra.runtime_seconds) + "s < 10s");
  }

  // --- P3: bracket convergence --------------------------------------------
  {
    const Report rep = cmd_converge_bracket(cfg);
    bool ok = checks_pass(rep, {"bracket_convergence_slope"}, detail);
    ok &= runtime_ok(rep.runtime_seconds, 10.0);
    record("P3", "bracket convergence at rate 1/N", ok,
           detail + "; runtime " + fmt(rep.runtime_seconds) + "s < 10s");
  }

  // --- P4 / P5: flow equivalences -----------------------------------------
  {
    const Report rep = cmd_flow_equivalence(cfg);
    bool ok = checks_pass(rep, {"bbgky_field_equals_rhs", "bbgky_worked_coefficients"}, detail);
    ok &= runtime_ok(rep.runtime_seconds, 60.0);
    record("P4", "N-body flow equivalence with worked coefficients", ok,
           detail + "; runtime " + fmt(rep.runtime_seconds) + "s < 60s");
    bool ok5 = checks_pass(rep, {"gp_field_equals_rhs"}, detail);
    ok5 &= runtime_ok(rep.runtime_seconds, 60.0);
    record("P5", "limiting flow equivalence", ok5,
           detail + "; runtime " + fmt(rep.runtime_seconds) + "s < 60s");
  }

  // --- P6: the three embedding identities ----------------------------------
  const Report morphism = cmd_morphism(cfg);
  {
    bool ok = checks_pass(morphism,
                          {"density_matrix_map_poisson", "rdm_duality",
                           "factorized_embedding_poisson"},
                          detail);
    ok &= runtime_ok(morphism.runtime_seconds, 120.0);
    record("P6", "Poisson morphisms of the three embeddings", ok,
           detail + "; runtime " + fmt(morphism.runtime_seconds) + "s < 120s");
  }

  // --- P7: Hamiltonian pullback, timed on its own --------------------------
  {
    const auto t0 = std::chrono::steady_clock::now();
    GridSpec grid{64, 4.0 * M_PI};
    ModelParams p;
    Rng rng(cfg.seed * 0x9e3779b97f4a7c15ULL + 317);
    const auto h_fun = PolynomialFunctional::trace_functional(
        w_gp(grid, p), PolynomialFunctional::Context::Infinite);
    double worst = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
      const auto phi = random_smooth_wavefunction(grid, rng);
      worst = std::max(worst, std::abs(evaluate_pullback(h_fun, phi) - h_nls(phi, p)));
      if (rep == 0)  // the fused and materialized routes agree
        worst = std::max(worst,
                         std::abs(evaluate(h_fun, iota_fact(phi, 2)) - h_nls(phi, p)));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = worst < 1e-12 && runtime_ok(secs, 5.0);
    record("P7", "energy pullback through the factorized embedding", ok,
           "max residual " + fmt(worst) + " < 1e-12 over 10 states at n=64; runtime " +
               fmt(secs) + "s < 5s");
  }

  // --- P8: commuting diagram ------------------------------------------------
  {
    const Report rep = cmd_commuting_diagram(cfg);
    bool ok = checks_pass(rep, {"commuting_diagram_sup", "rk4_order", "rk4_hermit"}, detail);
    ok &= runtime_ok(rep.runtime_seconds, 300.0);
    record("P8", "reduce-then-integrate commutes with integrate-then-reduce", ok,
           detail + "; runtime " + fmt(rep.runtime_seconds) + "s < 300s");
  }

  // --- P9: split-step conservation and residual decay -----------------------
  {
    const Report rep = cmd_nls_gp(cfg);
    bool ok = checks_pass(
        rep, {"splitstep_mass_conservation", "energy_drift_slope", "gp_residual_slope"}, detail);
    ok &= runtime_ok(rep.runtime_seconds, 120.0);
    record("P9", "split-step conservation and factorized-residual decay", ok,
           detail + "; runtime " + fmt(rep.runtime_seconds) + "s < 120s");
  }

  // --- P10: derivative and gradient oracles ---------------------------------
  {
    bool ok = checks_pass(algebra,
                          {"gateaux_fd_oracle", "pullback_gradient_fd_oracle",
                           "dm_gradient_fd_oracle"},
                          detail);
    ok &= runtime_ok(algebra.runtime_seconds, 60.0);
    record("P10", "analytic derivatives match finite differences", ok,
           detail + "; runtime " + fmt(algebra.runtime_seconds) + "s < 60s");
  }

  bool all = true;
  for (const auto& c : results) {
    all &= c.pass;
    std::printf("%-4s %-58s %s\n     %s\n", c.id.c_str(), c.label.c_str(),
                c.pass ? "PASS" : "FAIL", c.detail.c_str());
  }
  std::printf("acceptance: %s (%zu/%zu criteria)\n", all ? "PASS" : "FAIL",
              static_cast<std::size_t>(
                  std::count_if(results.begin(), results.end(),
                                [](const Criterion& c) { return c.pass; })),
              results.size());
  return all ? 0 : 1;
}
