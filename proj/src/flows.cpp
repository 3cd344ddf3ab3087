#include "hierakit/flows.hpp"

#include <cmath>

namespace hierakit {

namespace {

Matrix evolution_operator(const KOperator& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.data);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("propagate: eigendecomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  Vector phase(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    phase(i) = std::polar(1.0, -t * ev(i));
  return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

WaveFunction propagate_schrodinger(const WaveFunction& phi0, const KOperator& h, double t) {
  if (phi0.values.size() != h.dim())
    throw std::invalid_argument("propagate_schrodinger: dimension mismatch");
  return WaveFunction{phi0.particles, phi0.grid, evolution_operator(h, t) * phi0.values};
}

KOperator propagate_von_neumann(const KOperator& psi0, const KOperator& h, double t) {
  if (psi0.dim() != h.dim())
    throw std::invalid_argument("propagate_von_neumann: dimension mismatch");
  const Matrix u = evolution_operator(h, t);
  return KOperator(psi0.k, psi0.d, u * psi0.data * u.adjoint());
}

HierarchyTrajectory rk4_hierarchy(
    const std::function<DensityHierarchy(const DensityHierarchy&)>& rhs,
    const DensityHierarchy& gamma0, const FlowConfig& config) {
  if (config.dt <= 0.0 || config.t_final < config.dt)
    throw std::invalid_argument("rk4_hierarchy: need dt > 0 and T >= dt");
  const int steps = static_cast<int>(std::llround(config.t_final / config.dt));

  HierarchyTrajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(gamma0);

  DensityHierarchy g = gamma0;
  for (int s = 1; s <= steps; ++s) {
    const DensityHierarchy k1 = rhs(g);
    const DensityHierarchy k2 = rhs(g + (config.dt / 2.0) * k1);
    const DensityHierarchy k3 = rhs(g + (config.dt / 2.0) * k2);
    const DensityHierarchy k4 = rhs(g + config.dt * k3);
    g += (config.dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    // keep the components exactly Hermitian; the correction is a diagnostic
    for (auto& [k, op] : g.entries) {
      const Matrix herm = 0.5 * (op.data + op.data.adjoint());
      traj.max_hermit_correction =
          std::max(traj.max_hermit_correction, (op.data - herm).cwiseAbs().maxCoeff());
      op.data = herm;
    }
    if (s % config.record_every == 0 || s == steps) {
      traj.times.push_back(s * config.dt);
      traj.states.push_back(g);
    }
  }
  return traj;
}

namespace {

// exact kinetic half-step: Fourier phases exp(-i k^2 dt / 2)
Matrix half_kinetic_matrix(const GridSpec& grid, double dt) {
  const int n = grid.n;
  Matrix fwd(n, n), inv(n, n);
  for (int m = 0; m < n; ++m)
    for (int a = 0; a < n; ++a) {
      const double ph = -2.0 * M_PI * m * a / n;
      fwd(m, a) = Complex(std::cos(ph), std::sin(ph));
      inv(a, m) = Complex(std::cos(ph), -std::sin(ph)) / static_cast<double>(n);
    }
  Vector kin_phase(n);
  for (int m = 0; m < n; ++m) {
    const double k = grid.freq(m);
    kin_phase(m) = std::polar(1.0, -k * k * dt / 2.0);
  }
  return inv * kin_phase.asDiagonal() * fwd;
}

void strang_step(Vector& v, const Matrix& half_kinetic, double kappa, double dt) {
  v = half_kinetic * v;
  for (Eigen::Index m = 0; m < v.size(); ++m)
    v(m) *= std::polar(1.0, -2.0 * kappa * std::norm(v(m)) * dt);
  v = half_kinetic * v;
}

}  // namespace

WaveTrajectory splitstep_nls(const WaveFunction& phi0, const ModelParams& p,
                             const FlowConfig& config) {
  if (phi0.particles != 1) throw std::invalid_argument("splitstep_nls: one-particle state");
  if (config.dt <= 0.0 || config.t_final < config.dt)
    throw std::invalid_argument("splitstep_nls: need dt > 0 and T >= dt");
  const int steps = static_cast<int>(std::llround(config.t_final / config.dt));
  const Matrix half_kinetic = half_kinetic_matrix(phi0.grid, config.dt);

  WaveTrajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(phi0);

  Vector v = phi0.values;
  for (int s = 1; s <= steps; ++s) {
    strang_step(v, half_kinetic, p.kappa, config.dt);
    if (s % config.record_every == 0 || s == steps) {
      traj.times.push_back(s * config.dt);
      traj.states.push_back(WaveFunction{1, phi0.grid, v});
    }
  }
  return traj;
}

WaveFunction splitstep_nls_step(const WaveFunction& phi, const ModelParams& p, double dt) {
  if (phi.particles != 1) throw std::invalid_argument("splitstep_nls_step: one-particle state");
  Vector v = phi.values;
  strang_step(v, half_kinetic_matrix(phi.grid, dt), p.kappa, dt);
  return WaveFunction{1, phi.grid, std::move(v)};
}

double gp_residual(const WaveTrajectory& traj, int k_out, const ModelParams& p) {
  if (traj.states.size() < 3)
    throw std::invalid_argument("gp_residual: need at least three snapshots");
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < traj.states.size(); ++i) {
    const double dt2 = traj.times[i + 1] - traj.times[i - 1];
    const DensityHierarchy before = iota_fact(traj.states[i - 1], k_out);
    const DensityHierarchy after = iota_fact(traj.states[i + 1], k_out);
    const DensityHierarchy fd = (1.0 / dt2) * (after - before);
    const DensityHierarchy rhs = gp_rhs(iota_fact(traj.states[i], k_out + 1), p, k_out);
    for (int k = 1; k <= k_out; ++k)
      worst = std::max(worst, (fd.at(k) - rhs.at(k)).max_norm());
  }
  return worst;
}

}  // namespace hierakit
