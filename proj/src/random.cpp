#include "hierakit/random.hpp"

#include <cmath>

namespace hierakit {

double Rng::uniform() {
  // 53-bit mantissa from the top bits of the 64-bit state
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Complex Rng::complex_gaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return Complex(re, im);
}

KOperator random_koperator(int d, int k, Rng& rng) {
  const std::size_t dim = checked_dim(d, k);
  Matrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) m(i, j) = rng.complex_gaussian();
  return KOperator(k, d, std::move(m));
}

KOperator random_skew_bosonic(int d, int k, Rng& rng) {
  KOperator m = random_koperator(d, k, rng);
  m.data = 0.5 * (m.data - m.data.adjoint().eval());
  return sym_op(m);
}

KOperator random_density(int d, int k, Rng& rng, const Weights& w) {
  KOperator g = random_koperator(d, k, rng);
  KOperator rho(k, d, (g.data * g.data.adjoint()).eval());
  rho = sym_op(rho);
  const Complex tr = trace_pair(identity_op(d, k), rho, w);
  rho *= Complex(1.0 / tr.real());
  return rho;
}

ObservableHierarchy random_observable_hierarchy(int d, int max_support, Rng& rng) {
  ObservableHierarchy out;
  for (int k = 1; k <= max_support; ++k) out.entries.emplace(k, random_skew_bosonic(d, k, rng));
  return out;
}

DensityHierarchy random_density_hierarchy(int d, int max_support, Rng& rng, const Weights& w) {
  DensityHierarchy out;
  out.weights = w;
  for (int k = 1; k <= max_support; ++k) out.entries.emplace(k, random_density(d, k, rng, w));
  return out;
}

WaveFunction random_wavefunction(const GridSpec& grid, int particles, Rng& rng) {
  const std::size_t dim = checked_dim(grid.n, particles);
  Vector v(dim);
  for (std::size_t i = 0; i < dim; ++i) v(i) = rng.complex_gaussian();
  WaveFunction phi{particles, grid, std::move(v)};
  phi.values /= phi.norm();
  return phi;
}

WaveFunction random_smooth_wavefunction(const GridSpec& grid, Rng& rng) {
  const int n = grid.n;
  Vector v = Vector::Zero(n);
  for (int m = 0; m < n; ++m) {
    const double k = grid.freq(m);
    const Complex c = rng.complex_gaussian() * std::exp(-0.5 * k * k);
    for (int a = 0; a < n; ++a) {
      const double ph = 2.0 * M_PI * m * a / n;
      v(a) += c * Complex(std::cos(ph), std::sin(ph));
    }
  }
  WaveFunction phi{1, grid, std::move(v)};
  phi.values /= phi.norm();
  return phi;
}

WaveFunction random_bosonic_wavefunction(const GridSpec& grid, int particles, Rng& rng) {
  WaveFunction phi = random_wavefunction(grid, particles, rng);
  phi.values = sym_vec(phi.values, grid.n, particles);
  phi.values /= phi.norm();
  return phi;
}

}  // namespace hierakit
