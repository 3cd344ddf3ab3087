#include "hierakit/models_1d.hpp"

#include <cmath>
#include <cstdio>
#include <mutex>
#include <numeric>
#include <set>

namespace hierakit {

double GridSpec::freq(int m) const {
  int mm = m % n;
  if (mm > n / 2) mm -= n;
  return 2.0 * M_PI * mm / L;
}

double WaveFunction::norm() const {
  return std::sqrt(grid.weights().particle(particles) * values.squaredNorm());
}

bool WaveFunction::is_bosonic(double tol) const {
  const Vector s = sym_vec(values, grid.n, particles);
  return (s - values).cwiseAbs().maxCoeff() <= tol;
}

WaveFunction operator+(WaveFunction a, const WaveFunction& b) {
  a.values += b.values;
  return a;
}

WaveFunction operator-(WaveFunction a, const WaveFunction& b) {
  a.values -= b.values;
  return a;
}

WaveFunction operator*(Complex c, WaveFunction a) {
  a.values *= c;
  return a;
}

Complex inner(const WaveFunction& f, const WaveFunction& g) {
  if (f.particles != g.particles || f.grid.n != g.grid.n)
    throw std::invalid_argument("inner(WaveFunction): shape mismatch");
  return inner(f.values, g.values, f.grid.weights(), f.particles);
}

double periodic_distance(double x, double L) {
  double y = std::fmod(x, L);
  if (y < -L / 2) y += L;
  if (y >= L / 2) y -= L;
  return y;
}

namespace {

// Fourier multiplier operator F^dagger diag(mult) F.  The matrix is circulant,
// so only the kernel row is computed; the mode sums cancel heavily (k^2
// multipliers reach n^2/4) and are accumulated compensated.
KOperator fourier_multiplier(const GridSpec& grid, const std::vector<Complex>& mult) {
  const int n = grid.n;
  std::vector<Complex> kernel(n);
  for (int j = 0; j < n; ++j) {
    CompensatedSum re, im;
    for (int m = 0; m < n; ++m) {
      const double phase = 2.0 * M_PI * m * j / n;
      const double c = std::cos(phase), s = std::sin(phase);
      re.add(mult[m].real() * c - mult[m].imag() * s);
      im.add(mult[m].real() * s + mult[m].imag() * c);
    }
    kernel[j] = Complex(re.value(), im.value()) / static_cast<double>(n);
  }
  Matrix out(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int j = (a - b) % n;
      if (j < 0) j += n;
      out(a, b) = kernel[j];
    }
  return KOperator(1, n, std::move(out));
}

}  // namespace

KOperator laplacian(const GridSpec& grid) {
  std::vector<Complex> mult(grid.n);
  for (int m = 0; m < grid.n; ++m) {
    const double k = grid.freq(m);
    mult[m] = -k * k;
  }
  return fourier_multiplier(grid, mult);
}

KOperator gradient_op(const GridSpec& grid) {
  std::vector<Complex> mult(grid.n);
  for (int m = 0; m < grid.n; ++m) mult[m] = Complex(0.0, grid.freq(m));
  return fourier_multiplier(grid, mult);
}

namespace {

double raw_bump(double x, double w) {
  const double u = x / w;
  return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
}

// once per (grid, width) configuration
void warn_underresolved(const GridSpec& grid, double width) {
  static std::mutex mu;
  static std::set<std::pair<int, long long>> seen;
  const std::lock_guard<std::mutex> lock(mu);
  if (!seen.emplace(grid.n, std::llround(width * 1e12)).second) return;
  std::fprintf(stderr,
               "hierakit: scaled interaction width %.3g below 2h = %.3g; "
               "profile underresolved\n",
               width, 2.0 * grid.h());
}

// Normalization making the discrete integral of the unscaled bump exactly 1.
double bump_norm_constant(const GridSpec& grid, const ModelParams& p) {
  const double w = p.bump_width_fraction * grid.L;
  double mass = 0.0;
  for (int m = 0; m < grid.n; ++m)
    mass += grid.h() * raw_bump(periodic_distance(grid.x(m), grid.L), w);
  if (mass <= 0.0) throw std::runtime_error("bump profile: empty support on this grid");
  return 1.0 / mass;
}

}  // namespace

Eigen::VectorXd bump_profile(const GridSpec& grid, const ModelParams& p) {
  const double w = p.bump_width_fraction * grid.L;
  const double c = bump_norm_constant(grid, p);
  Eigen::VectorXd v(grid.n);
  for (int m = 0; m < grid.n; ++m)
    v(m) = c * raw_bump(periodic_distance(grid.x(m), grid.L), w);
  return v;
}

Eigen::VectorXd scaled_profile(const GridSpec& grid, const ModelParams& p) {
  const double w = p.bump_width_fraction * grid.L;
  const double scale = std::pow(static_cast<double>(p.n_particles), p.beta);
  if (w / scale < 2.0 * grid.h()) warn_underresolved(grid, w / scale);
  const double c = bump_norm_constant(grid, p);
  Eigen::VectorXd v(grid.n);
  for (int m = 0; m < grid.n; ++m)
    v(m) = scale * c * raw_bump(scale * periodic_distance(grid.x(m), grid.L), w);
  return v;
}

KOperator potential_vn(const GridSpec& grid, const ModelParams& p) {
  const Eigen::VectorXd prof = scaled_profile(grid, p);
  const std::size_t dim = checked_dim(grid.n, 2);
  Matrix out = Matrix::Zero(dim, dim);
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j) {
      // V_N evaluated at the periodic separation of the two coordinates.
      int diff = i - j;
      diff %= grid.n;
      if (diff < 0) diff += grid.n;
      const std::size_t idx = static_cast<std::size_t>(i) * grid.n + j;
      out(idx, idx) = prof(diff);
    }
  return KOperator(2, grid.n, std::move(out));
}

KOperator delta2_grid(const GridSpec& grid) {
  const std::size_t dim = checked_dim(grid.n, 2);
  Matrix out = Matrix::Zero(dim, dim);
  for (int i = 0; i < grid.n; ++i) {
    const std::size_t idx = static_cast<std::size_t>(i) * grid.n + i;
    out(idx, idx) = 1.0 / grid.h();
  }
  return KOperator(2, grid.n, std::move(out));
}

KOperator hamiltonian_n(const GridSpec& grid, const ModelParams& p) {
  const int n_part = p.n_particles;
  checked_dim(grid.n, n_part);
  const KOperator kin = laplacian(grid);
  KOperator h = zero_op(grid.n, n_part);
  for (int j = 0; j < n_part; ++j) {
    KOperator t = extend(kin, {j}, n_part);
    t *= Complex(-1.0);
    h += t;
  }
  if (n_part >= 2) {
    const KOperator v = potential_vn(grid, p);
    const double coupling = 2.0 * p.kappa / (n_part - 1);
    for (int i = 0; i < n_part; ++i)
      for (int j = i + 1; j < n_part; ++j) {
        KOperator t = extend(v, {i, j}, n_part);
        t *= Complex(coupling);
        h += t;
      }
  }
  return h;
}

ObservableHierarchy w_bbgky(const GridSpec& grid, const ModelParams& p) {
  ObservableHierarchy out;
  out.finite_n = p.n_particles;
  KOperator kin = laplacian(grid);
  kin *= Complex(0.0, 1.0);  // -i (-Delta)
  out.entries.emplace(1, std::move(kin));
  KOperator v = potential_vn(grid, p);
  v *= Complex(0.0, -p.kappa);
  out.entries.emplace(2, std::move(v));
  return out;
}

ObservableHierarchy w_gp(const GridSpec& grid, const ModelParams& p) {
  ObservableHierarchy out;
  KOperator kin = laplacian(grid);
  kin *= Complex(0.0, 1.0);
  out.entries.emplace(1, std::move(kin));
  KOperator v = delta2_grid(grid);
  v *= Complex(0.0, -p.kappa);
  out.entries.emplace(2, std::move(v));
  return out;
}

KOperator iota_dm(const WaveFunction& phi) {
  return ket_bra(phi.values, phi.values, phi.grid.n, phi.particles);
}

DensityHierarchy iota_rdm(const KOperator& psi, const Weights& w) {
  DensityHierarchy out;
  out.weights = w;
  for (int k = 1; k <= psi.k; ++k) out.entries.emplace(k, partial_trace(psi, k, w));
  return out;
}

DensityHierarchy iota_fact(const WaveFunction& phi, int k_max) {
  if (phi.particles != 1) throw std::invalid_argument("iota_fact: expects a one-particle state");
  DensityHierarchy out;
  out.weights = phi.grid.weights();
  Vector power = phi.values;
  for (int k = 1; k <= k_max; ++k) {
    out.entries.emplace(k, ket_bra(power, power, phi.grid.n, k));
    if (k < k_max) power = tensor_product_vec(power, phi.values);
  }
  return out;
}

double h_nls(const WaveFunction& phi, const ModelParams& p) {
  if (phi.particles != 1) throw std::invalid_argument("h_nls: expects a one-particle state");
  const KOperator grad = gradient_op(phi.grid);
  const Vector dphi = grad.data * phi.values;
  const double h = phi.grid.h();
  double acc = 0.0;
  for (Eigen::Index m = 0; m < phi.values.size(); ++m) {
    const double a2 = std::norm(phi.values(m));
    acc += h * (std::norm(dphi(m)) + p.kappa * a2 * a2);
  }
  return acc;
}

WaveFunction nls_rhs(const WaveFunction& phi, const ModelParams& p) {
  const KOperator lap = laplacian(phi.grid);
  Vector out = -(lap.data * phi.values);
  for (Eigen::Index m = 0; m < out.size(); ++m)
    out(m) += 2.0 * p.kappa * std::norm(phi.values(m)) * phi.values(m);
  out *= Complex(0.0, -1.0);
  return WaveFunction{1, phi.grid, std::move(out)};
}

DensityHierarchy bbgky_rhs(const DensityHierarchy& gamma, const GridSpec& grid,
                           const ModelParams& p) {
  const int n_part = p.n_particles;
  if (gamma.max_support() < n_part)
    throw std::invalid_argument("bbgky_rhs: density hierarchy lacks components up to N");
  const KOperator kin = laplacian(grid);
  const KOperator v = potential_vn(grid, p);
  DensityHierarchy out;
  out.weights = gamma.weights;
  for (int k = 1; k <= n_part; ++k) {
    const KOperator& gk = gamma.at(k);
    KOperator acc = zero_op(grid.n, k);
    // kinetic commutator, [-Delta_{x_k}, gamma]
    for (int a = 0; a < k; ++a) {
      KOperator t = extend(kin, {a}, k);
      t *= Complex(-1.0);
      acc += t * gk - gk * t;
    }
    // pair interactions inside the first k coordinates
    if (k >= 2) {
      const double c = 2.0 * p.kappa / (n_part - 1);
      for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) {
          KOperator t = extend(v, {a, b}, k);
          t *= Complex(c);
          acc += t * gk - gk * t;
        }
    }
    // collision term coupling to gamma^(k+1); absent at k = N
    if (k < n_part) {
      const KOperator& gk1 = gamma.at(k + 1);
      const double c = 2.0 * p.kappa * (n_part - k) / (n_part - 1);
      KOperator coll = zero_op(grid.n, k);
      for (int a = 0; a < k; ++a) {
        const KOperator t = extend(v, {a, k}, k + 1);
        coll += partial_trace(t * gk1 - gk1 * t, k, gamma.weights);
      }
      coll *= Complex(c);
      acc += coll;
    }
    acc *= Complex(0.0, -1.0);
    out.entries.emplace(k, std::move(acc));
  }
  return out;
}

KOperator b_contraction(const KOperator& gamma_kp1) {
  const int k = gamma_kp1.k - 1;
  if (k < 1) throw std::invalid_argument("b_contraction: needs at least a 2-particle density");
  const int d = gamma_kp1.d;
  const std::size_t dim = checked_dim(d, k);
  Matrix out = Matrix::Zero(dim, dim);
  std::vector<int> row(k), col(k);
  for (std::size_t r = 0; r < dim; ++r) {
    decompose_index(r, d, k, row.data());
    for (std::size_t c = 0; c < dim; ++c) {
      decompose_index(c, d, k, col.data());
      Complex acc = 0.0;
      for (int a = 0; a < k; ++a) {
        // B^+: append x_a to both sides; B^-: append x'_a to both sides.
        const std::size_t rp = r * d + row[a], cp = c * d + row[a];
        const std::size_t rm = r * d + col[a], cm = c * d + col[a];
        acc += gamma_kp1.data(rp, cp) - gamma_kp1.data(rm, cm);
      }
      out(r, c) = acc;
    }
  }
  return KOperator(k, d, std::move(out));
}

DensityHierarchy gp_rhs(const DensityHierarchy& gamma, const ModelParams& p, int k_out) {
  if (gamma.entries.empty()) throw std::invalid_argument("gp_rhs: empty hierarchy");
  const int d = gamma.entries.begin()->second.d;
  GridSpec grid;  // reconstruct the grid from the stored quadrature weight
  grid.n = d;
  grid.L = gamma.weights.h * d;
  const KOperator kin = laplacian(grid);
  DensityHierarchy out;
  out.weights = gamma.weights;
  for (int k = 1; k <= k_out; ++k) {
    if (!gamma.has(k + 1))
      throw std::out_of_range("gp_rhs: hierarchy depth exhausted (need gamma^(" +
                              std::to_string(k + 1) + ")); supply a closure");
    const KOperator& gk = gamma.at(k);
    KOperator acc = zero_op(d, k);
    for (int a = 0; a < k; ++a) {
      KOperator t = extend(kin, {a}, k);
      t *= Complex(-1.0);
      acc += t * gk - gk * t;
    }
    KOperator coll = b_contraction(gamma.at(k + 1));
    coll *= Complex(2.0 * p.kappa);
    acc += coll;
    acc *= Complex(0.0, -1.0);
    out.entries.emplace(k, std::move(acc));
  }
  return out;
}

}  // namespace hierakit
