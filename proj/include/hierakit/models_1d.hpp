#pragma once

#include "hierakit/hierarchy_algebra.hpp"
#include "hierakit/tensor_core.hpp"

// Concrete 1-D periodic-grid realizations: spectral Laplacian, scaled pair
// interaction, grid delta, the many-body / hierarchy Hamiltonians, the
// wave-function-to-density embeddings and the equation right-hand sides.

namespace hierakit {

struct GridSpec {
  int n = 8;       // grid points
  double L = 2.0 * 3.14159265358979323846;  // period

  double h() const { return L / n; }
  double x(int m) const { return m * h(); }
  Weights weights() const { return Weights{h()}; }
  // Signed frequency 2 pi m~ / L with m~ in (-n/2, n/2]
  double freq(int m) const;
};

struct ModelParams {
  double kappa = 1.0;   // +1 defocusing, -1 focusing
  double beta = 0.5;    // interaction scaling exponent, in (0,1)
  int n_particles = 2;  // N
  double bump_width_fraction = 0.25;  // support half-width of V as fraction of L
};

struct WaveFunction {
  int particles = 1;
  GridSpec grid;
  Vector values;  // length n^particles

  double norm() const;  // sqrt(h^k sum |f|^2)
  bool is_bosonic(double tol = 1e-12) const;
};

WaveFunction operator+(WaveFunction a, const WaveFunction& b);
WaveFunction operator-(WaveFunction a, const WaveFunction& b);
WaveFunction operator*(Complex c, WaveFunction a);
Complex inner(const WaveFunction& f, const WaveFunction& g);

// Periodic signed distance folded into [-L/2, L/2).
double periodic_distance(double x, double L);

// Fourier-spectral second derivative on the periodic grid (self-adjoint,
// negative semidefinite, annihilates constants).  Returns Delta; callers
// supply the sign.
KOperator laplacian(const GridSpec& grid);
// Fourier-spectral first derivative (multiplier i k).
KOperator gradient_op(const GridSpec& grid);

// Compactly supported even bump c exp(-1/(1-(x/w)^2)), renormalized so the
// discrete integral h sum V(x_m) equals 1 exactly.
Eigen::VectorXd bump_profile(const GridSpec& grid, const ModelParams& p);
// Values V_N(x_m) = N^beta V(N^beta x_m) of the scaled profile.
Eigen::VectorXd scaled_profile(const GridSpec& grid, const ModelParams& p);
// Two-particle multiplication operator V_N(X_1 - X_2).
KOperator potential_vn(const GridSpec& grid, const ModelParams& p);
// Two-particle multiplication operator with entry 1/h on the diagonal
// configurations x_1 = x_2; makes Tr_2(delta . gamma) an exact kernel
// evaluation on the grid.
KOperator delta2_grid(const GridSpec& grid);

// H_N = sum_j (-Delta_j) + (2 kappa / (N-1)) sum_{i<j} V_N(X_i - X_j).
KOperator hamiltonian_n(const GridSpec& grid, const ModelParams& p);

// Skew-adjoint generator hierarchies -i W: the functional Tr(W . Gamma) is
// recovered as i Tr((-i W) . Gamma).
ObservableHierarchy w_bbgky(const GridSpec& grid, const ModelParams& p);
ObservableHierarchy w_gp(const GridSpec& grid, const ModelParams& p);

// |Phi><Phi| (kernel Phi(x) conj(Phi(x'))).
KOperator iota_dm(const WaveFunction& phi);
// Reduced density matrices (Tr_{k+1..N} Psi)_{k=1..N}.
DensityHierarchy iota_rdm(const KOperator& psi, const Weights& w);
// Factorized hierarchy (|phi^(x) k><phi^(x) k|)_{k=1..K}.
DensityHierarchy iota_fact(const WaveFunction& phi, int k_max);

double h_nls(const WaveFunction& phi, const ModelParams& p);
// -i(-Delta phi + 2 kappa |phi|^2 phi).
WaveFunction nls_rhs(const WaveFunction& phi, const ModelParams& p);

// Right-hand side of d/dt gamma^(k) for the coupled reduced-density system:
// commutator with the kinetic part, pair interactions inside the first k
// coordinates, and the weighted collision term coupling to gamma^(k+1).
DensityHierarchy bbgky_rhs(const DensityHierarchy& gamma, const GridSpec& grid,
                           const ModelParams& p);
// Limiting system: d/dt gamma^(k) = -i([-Delta_k, gamma^(k)] + 2 kappa
// B_{k+1} gamma^(k+1)) for k = 1..k_out; requires gamma^(k_out+1).
DensityHierarchy gp_rhs(const DensityHierarchy& gamma, const ModelParams& p, int k_out);
// B_{k+1} contraction: sum_alpha (B^+_alpha - B^-_alpha) gamma^(k+1), as
// direct kernel evaluations.
KOperator b_contraction(const KOperator& gamma_kp1);

}  // namespace hierakit
