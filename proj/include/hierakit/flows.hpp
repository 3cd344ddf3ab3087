#pragma once

#include <functional>

#include "hierakit/models_1d.hpp"

// Time integrators and trajectory containers for the linear many-body flows,
// the coupled reduced-density systems and the cubic Schrodinger equation.

namespace hierakit {

enum class FlowMethod { Rk4, ExactExponential, StrangSplit };

struct FlowConfig {
  double dt = 1e-3;
  double t_final = 0.5;
  FlowMethod method = FlowMethod::Rk4;
  int record_every = 1;  // steps between recorded snapshots
};

// exp(-i t H) Phi_0 via Hermitian eigendecomposition.
WaveFunction propagate_schrodinger(const WaveFunction& phi0, const KOperator& h, double t);
// exp(-i t H) Psi_0 exp(+i t H).
KOperator propagate_von_neumann(const KOperator& psi0, const KOperator& h, double t);

struct HierarchyTrajectory {
  std::vector<double> times;
  std::vector<DensityHierarchy> states;
  double max_hermit_correction = 0.0;  // largest re-Hermitization applied
};

// Classical RK4 for d/dt Gamma = rhs(Gamma); each step re-Hermitizes the
// components ((gamma + gamma*)/2) and records the correction norm.
HierarchyTrajectory rk4_hierarchy(
    const std::function<DensityHierarchy(const DensityHierarchy&)>& rhs,
    const DensityHierarchy& gamma0, const FlowConfig& config);

struct WaveTrajectory {
  std::vector<double> times;
  std::vector<WaveFunction> states;
};

// Strang splitting for the cubic Schrodinger flow: exact Fourier kinetic
// half-steps around an exact pointwise phase rotation exp(-2 i kappa |phi|^2 dt).
WaveTrajectory splitstep_nls(const WaveFunction& phi0, const ModelParams& p,
                             const FlowConfig& config);

// A single Strang step; dt may be negative (the exact inverse of the +dt
// step), which gives centered three-point windows around any state.
WaveFunction splitstep_nls_step(const WaveFunction& phi, const ModelParams& p, double dt);

// Max over interior snapshots and components k <= k_out of
// || d/dt iota_fact(phi(t)) - gp_rhs(iota_fact(phi(t))) || with the time
// derivative estimated by centered differences of adjacent snapshots.
double gp_residual(const WaveTrajectory& traj, int k_out, const ModelParams& p);

}  // namespace hierakit
