#pragma once

#include <cstdint>
#include <random>

#include "hierakit/hierarchy_algebra.hpp"
#include "hierakit/models_1d.hpp"

// Seeded random instances.  All randomness in the library flows through Rng,
// which layers an explicit Box-Muller transform over mt19937_64 so that a
// given seed reproduces the same draws on any standard library.

namespace hierakit {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();   // [0, 1)
  double gaussian();  // standard normal
  Complex complex_gaussian();

 private:
  std::mt19937_64 engine_;
};

// Dense matrix with independent complex Gaussian entries.
KOperator random_koperator(int d, int k, Rng& rng);
// Skew-adjointified ((M - M*)/2) and bosonically symmetrized.
KOperator random_skew_bosonic(int d, int k, Rng& rng);
// G G* / trace-normalized and symmetrized; self-adjoint bosonic with unit
// weighted trace.
KOperator random_density(int d, int k, Rng& rng, const Weights& w);

ObservableHierarchy random_observable_hierarchy(int d, int max_support, Rng& rng);
DensityHierarchy random_density_hierarchy(int d, int max_support, Rng& rng, const Weights& w);

// Unit-norm random states; the smooth variant damps Fourier modes so that
// spectral energies stay O(1).
WaveFunction random_wavefunction(const GridSpec& grid, int particles, Rng& rng);
WaveFunction random_smooth_wavefunction(const GridSpec& grid, Rng& rng);
WaveFunction random_bosonic_wavefunction(const GridSpec& grid, int particles, Rng& rng);

}  // namespace hierakit
