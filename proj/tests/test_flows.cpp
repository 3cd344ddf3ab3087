#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hierakit/flows.hpp"
#include "hierakit/random.hpp"
#include "hierakit/report.hpp"

using namespace hierakit;

namespace {

WaveFunction plane_wave(const GridSpec& grid, int mode, double amplitude = 1.0) {
  Vector v(grid.n);
  for (int m = 0; m < grid.n; ++m)
    v(m) = amplitude * std::polar(1.0, 2.0 * M_PI * mode * m / grid.n);
  return WaveFunction{1, grid, std::move(v)};
}

}  // namespace

TEST_CASE("schrodinger propagation") {
  GridSpec grid{8, 2.0 * M_PI};
  KOperator h = laplacian(grid);
  h *= Complex(-1.0);
  Rng rng(401);
  const auto phi = random_wavefunction(grid, 1, rng);
  SUBCASE("time zero is the identity") {
    const auto out = propagate_schrodinger(phi, h, 0.0);
    CHECK((out.values - phi.values).cwiseAbs().maxCoeff() < 1e-13);
  }
  SUBCASE("plane waves pick up the eigenphase") {
    const auto pw = plane_wave(grid, 2);
    const double lambda = std::pow(2.0 * M_PI * 2 / grid.L, 2);
    const auto out = propagate_schrodinger(pw, h, 0.7);
    const Vector expect = std::polar(1.0, -0.7 * lambda) * pw.values;
    CHECK((out.values - expect).cwiseAbs().maxCoeff() < 1e-11);
  }
  SUBCASE("unitary and energy conserving") {
    const auto out = propagate_schrodinger(phi, h, 1.0);
    CHECK(std::abs(out.norm() - phi.norm()) < 1e-10);
    const Complex e0 = inner(phi.values, h.data * phi.values, grid.weights(), 1);
    const Complex e1 = inner(out.values, h.data * out.values, grid.weights(), 1);
    CHECK(std::abs(e0 - e1) < 1e-10);
  }
}

TEST_CASE("von neumann propagation") {
  GridSpec grid{6, 2.0 * M_PI};
  ModelParams p;
  p.n_particles = 2;
  const KOperator h = hamiltonian_n(grid, p);
  Rng rng(411);
  SUBCASE("time zero is the identity") {
    const auto psi = random_density(grid.n, 2, rng, grid.weights());
    CHECK((propagate_von_neumann(psi, h, 0.0) - psi).max_norm() < 1e-13);
  }
  SUBCASE("commuting initial data is stationary") {
    // a function of H commutes with H
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.data);
    const Vector v = es.eigenvectors().col(0);
    const KOperator psi = ket_bra(v, v, grid.n, 2);
    CHECK((propagate_von_neumann(psi, h, 0.4) - psi).max_norm() < 1e-11);
  }
  SUBCASE("consistent with the wave-function flow through the density map") {
    const auto phi = random_bosonic_wavefunction(grid, 2, rng);
    const double t = 0.9;
    const KOperator lhs = iota_dm(propagate_schrodinger(phi, h, t));
    const KOperator rhs = propagate_von_neumann(iota_dm(phi), h, t);
    CHECK((lhs - rhs).max_norm() < 1e-10);
  }
  SUBCASE("trace and Hermiticity preserved over a unit horizon") {
    const auto psi = random_density(grid.n, 2, rng, grid.weights());
    const auto out = propagate_von_neumann(psi, h, 1.0);
    const Complex tr0 = trace_pair(identity_op(grid.n, 2), psi, grid.weights());
    const Complex tr1 = trace_pair(identity_op(grid.n, 2), out, grid.weights());
    CHECK(std::abs(tr0 - tr1) < 1e-10);
    CHECK(out.is_self_adjoint(1e-10));
  }
}

TEST_CASE("hierarchy integrator") {
  GridSpec grid{4, 2.0 * M_PI};
  ModelParams p;
  p.n_particles = 2;
  Rng rng(421);
  const auto gamma0 = iota_rdm(iota_dm(random_bosonic_wavefunction(grid, 2, rng)),
                               grid.weights());
  auto rhs = [&](const DensityHierarchy& g) { return bbgky_rhs(g, grid, p); };
  SUBCASE("zero right-hand side keeps the state") {
    auto zero_rhs = [&](const DensityHierarchy& g) { return 0.0 * g; };
    FlowConfig fc;
    fc.dt = 0.1;
    fc.t_final = 1.0;
    const auto traj = rk4_hierarchy(zero_rhs, gamma0, fc);
    for (int k = 1; k <= 2; ++k)
      CHECK((traj.states.back().at(k) - gamma0.at(k)).max_norm() == 0.0);
  }
  SUBCASE("fourth-order convergence against the exact exponential") {
    const KOperator h = hamiltonian_n(grid, p);
    const double t_end = 0.2;
    // at N = 2 the top component is the full density, so the exact flow is
    // the conjugated exponential followed by reduction
    const auto reference =
        iota_rdm(propagate_von_neumann(gamma0.at(2), h, t_end), grid.weights());
    std::vector<double> dts, errs;
    for (double dt : {8e-3, 4e-3, 2e-3}) {
      FlowConfig fc;
      fc.dt = dt;
      fc.t_final = t_end;
      fc.record_every = 1 << 20;
      const auto traj = rk4_hierarchy(rhs, gamma0, fc);
      double err = 0.0;
      for (int k = 1; k <= 2; ++k)
        err = std::max(err, (traj.states.back().at(k) - reference.at(k)).max_norm());
      dts.push_back(dt);
      errs.push_back(err);
    }
    const double slope = fit_loglog_slope(dts, errs);
    CHECK(slope > 3.8);
    CHECK(slope < 4.2);
  }
  SUBCASE("re-Hermitization corrections stay tiny") {
    FlowConfig fc;
    fc.dt = 1e-3;
    fc.t_final = 0.1;
    const auto traj = rk4_hierarchy(rhs, gamma0, fc);
    CHECK(traj.max_hermit_correction < 1e-9);
    for (const auto& st : traj.states) CHECK(st.invariant_residual() < 1e-10);
  }
}

TEST_CASE("split-step cubic flow") {
  GridSpec grid{16, 2.0 * M_PI};
  ModelParams p;
  Rng rng(431);
  SUBCASE("with the nonlinearity off, plane waves follow the free phase") {
    ModelParams free = p;
    free.kappa = 0.0;
    const auto pw = plane_wave(grid, 1, 0.7);
    FlowConfig fc;
    fc.dt = 0.01;
    fc.t_final = 0.3;
    const auto traj = splitstep_nls(pw, free, fc);
    const double k2 = std::pow(2.0 * M_PI / grid.L, 2);
    const Vector expect = std::polar(1.0, -k2 * 0.3) * pw.values;
    CHECK((traj.states.back().values - expect).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("mass is conserved to rounding") {
    const auto phi = random_smooth_wavefunction(grid, rng);
    FlowConfig fc;
    fc.dt = 1e-3;
    fc.t_final = 1.0;
    fc.record_every = 100;
    const auto traj = splitstep_nls(phi, p, fc);
    for (const auto& st : traj.states)
      CHECK(std::abs(st.norm() * st.norm() - phi.norm() * phi.norm()) < 1e-10);
  }
  SUBCASE("energy drift shrinks at second order") {
    const auto phi = random_smooth_wavefunction(grid, rng);
    std::vector<double> dts, drifts;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
      FlowConfig fc;
      fc.dt = dt;
      fc.t_final = 0.5;
      fc.record_every = 1 << 20;
      const auto traj = splitstep_nls(phi, p, fc);
      dts.push_back(dt);
      drifts.push_back(std::abs(h_nls(traj.states.back(), p) - h_nls(phi, p)));
    }
    const double slope = fit_loglog_slope(dts, drifts);
    CHECK(slope > 1.8);
    CHECK(slope < 2.2);
  }
  SUBCASE("a backward step inverts a forward step") {
    const auto phi = random_smooth_wavefunction(grid, rng);
    const auto fwd = splitstep_nls_step(phi, p, 1e-2);
    const auto back = splitstep_nls_step(fwd, p, -1e-2);
    CHECK((back.values - phi.values).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("split-step is consistent with the cubic right-hand side") {
  GridSpec grid{16, 2.0 * M_PI};
  ModelParams p;
  p.kappa = -1.0;
  Rng rng(436);
  const auto phi = random_smooth_wavefunction(grid, rng);
  std::vector<double> dts, errs;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    const auto fwd = splitstep_nls_step(phi, p, dt);
    const auto back = splitstep_nls_step(phi, p, -dt);
    const Vector fd = (fwd.values - back.values) / (2.0 * dt);
    dts.push_back(dt);
    errs.push_back((fd - nls_rhs(phi, p).values).cwiseAbs().maxCoeff());
  }
  const double slope = fit_loglog_slope(dts, errs);
  CHECK(slope > 1.8);
  CHECK(slope < 2.2);
  CHECK(errs.back() < 1e-4);
}

TEST_CASE("factorized-trajectory residual") {
  ModelParams p;
  SUBCASE("zero data gives zero residual") {
    GridSpec grid{8, 2.0 * M_PI};
    WaveTrajectory traj;
    const WaveFunction zero{1, grid, Vector::Zero(grid.n)};
    traj.times = {0.0, 0.1, 0.2};
    traj.states = {zero, zero, zero};
    CHECK(gp_residual(traj, 2, p) == 0.0);
  }
  SUBCASE("stationary plane-wave solutions leave only rounding") {
    // the factorized hierarchy of A e^{i(kx - w t)} is constant in time and
    // the limiting right-hand side vanishes on it
    GridSpec grid{8, 2.0 * M_PI};
    const auto pw = plane_wave(grid, 1, 0.6);
    FlowConfig fc;
    fc.dt = 1e-2;
    fc.t_final = 0.1;
    fc.record_every = 1;
    const auto traj = splitstep_nls(pw, p, fc);
    CHECK(gp_residual(traj, 2, p) < 1e-10);
  }
  SUBCASE("generic data decays at the splitting order") {
    GridSpec grid{8, 2.0 * M_PI};
    Rng rng(441);
    const auto phi = random_smooth_wavefunction(grid, rng);
    std::vector<double> dts, resids;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
      FlowConfig fc;
      fc.dt = dt;
      fc.t_final = 10 * dt;
      fc.record_every = 1;
      const auto traj = splitstep_nls(phi, p, fc);
      dts.push_back(dt);
      resids.push_back(gp_residual(traj, 2, p));
    }
    const double slope = fit_loglog_slope(dts, resids);
    CHECK(slope > 1.8);
    CHECK(slope < 2.2);
  }
}
