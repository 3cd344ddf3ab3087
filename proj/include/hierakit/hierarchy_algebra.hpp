#pragma once

#include <boost/rational.hpp>

#include <map>
#include <optional>

#include "hierakit/tensor_core.hpp"

// Observable and density-matrix hierarchies, the k-to-N particle embeddings,
// the N-body and limiting Lie brackets, the induced Lie-Poisson brackets and
// their Hamiltonian vector fields.

namespace hierakit {

class PolynomialFunctional;  // functional_algebra.hpp

using Rational = boost::rational<long long>;

// Finitely supported sequence of skew-adjoint bosonic k-particle operators.
struct ObservableHierarchy {
  std::map<int, KOperator> entries;      // k -> operator, k >= 1
  std::optional<int> finite_n;           // FiniteN(N) context; nullopt = infinite

  int max_support() const;
  bool has(int k) const { return entries.count(k) != 0; }
  const KOperator& at(int k) const { return entries.at(k); }
  // Max over entries of the skew-adjointness / bosonic-symmetry residuals.
  double invariant_residual() const;

  ObservableHierarchy& operator+=(const ObservableHierarchy& rhs);
  ObservableHierarchy& operator*=(double c);
};

ObservableHierarchy operator+(ObservableHierarchy a, const ObservableHierarchy& b);
ObservableHierarchy operator*(double c, ObservableHierarchy a);

// Sequence of self-adjoint bosonic k-particle operators gamma^(k), k = 1..K.
struct DensityHierarchy {
  std::map<int, KOperator> entries;
  Weights weights;

  int max_support() const;
  bool has(int k) const { return entries.count(k) != 0; }
  const KOperator& at(int k) const { return entries.at(k); }
  double invariant_residual() const;

  DensityHierarchy& operator+=(const DensityHierarchy& rhs);
  DensityHierarchy& operator*=(double c);
};

DensityHierarchy operator+(DensityHierarchy a, const DensityHierarchy& b);
DensityHierarchy operator-(const DensityHierarchy& a, const DensityHierarchy& b);
DensityHierarchy operator*(double c, DensityHierarchy a);
// Largest entry-wise max-norm across components.
double sup_max_norm(const DensityHierarchy& g);
double sup_max_norm(const ObservableHierarchy& g);

// Exact rational combinatorics of the N-body hierarchy bracket.
//
// C_{k,N} = (k! binom(N,k))^{-1} = |P_k^N|^{-1}, and for min(l+j-1, N) = k,
//
//   C_{ljkrN} = N C_{l,N} C_{j,N} / (C_{k,N} * prod_{m=1}^{k-l-j+r} (N-k+m)),
//
// where the product counts the ordered placements of the k-(l+j-r) slots not
// touched by the contraction.  For k = l+j-1 the exponent k-l-j+r equals the
// usual r-1; for the truncated case k = N it is r-(l+j-N), which is what the
// embedding-route identity ("iota_epsilon intertwines the brackets") forces.
// The primed variant carries the extra binom(j,r) of the vector-field form.
struct BracketCoefficients {
  long long n = 1;  // particle number N

  static Rational c_kn(int k, long long n);
  static int r_min(int l, int j, long long n);  // r_0
  Rational coeff(int l, int j, int k, int r) const;
  Rational coeff_primed(int l, int j, int k, int r) const;
};

// Test hook threaded through the algebra suites: an additive perturbation of
// the (l,j) = (1,2) bracket coefficient, used as a negative control.
struct BracketOptions {
  double corrupt_coefficient = 0.0;
};

// C_{k,N} sum over ordered k-tuples of extensions of A into N slots.
KOperator epsilon(const KOperator& a, int n);
// Sum of epsilon over the components of a hierarchy; Lie algebra homomorphism
// onto N-particle observables with bracket N [.,.].
KOperator iota_epsilon(const ObservableHierarchy& a, int n);

// N-body hierarchy bracket, computed from k-particle matrices only.
ObservableHierarchy bracket_n(const ObservableHierarchy& a, const ObservableHierarchy& b, int n,
                              const BracketOptions& opts = {});
// Limiting bracket: k-th component sum_{l+j-1=k} Sym_k([A^(l), B^(j)]_1).
ObservableHierarchy bracket_inf(const ObservableHierarchy& a, const ObservableHierarchy& b);

// i Tr(A . Gamma) = sum_k i Tr_{1..k}(A^(k) gamma^(k)); real for skew x self.
double dot_trace(const ObservableHierarchy& a, const DensityHierarchy& gamma);
double dot_trace_imag_residual(const ObservableHierarchy& a, const DensityHierarchy& gamma);

// Hamiltonian vector field on density N-hierarchies for a generator hierarchy
// D = dH[Gamma]:
//   X^(l) = sum_j sum_{r=r0}^{min(l,j)} C'_{ljkrN}
//           Tr_{l+1..k}( [ sum_{alpha in P_r^l} D^(j)_(alpha, l+1..l+j-r),
//                          gamma^(k) ] ),   k = min(l+j-1, N).
DensityHierarchy vector_field_n_from_generator(const ObservableHierarchy& d,
                                               const DensityHierarchy& gamma, int n,
                                               const BracketOptions& opts = {});
// Limiting field X^(l) = sum_j j Tr_{l+1..l+j-1}([sum_alpha D^(j)_(alpha,...),
// gamma^(l+j-1)]) for components l = 1..k_out.
DensityHierarchy vector_field_inf_from_generator(const ObservableHierarchy& d,
                                                 const DensityHierarchy& gamma, int k_out);

// Functional front-ends (derivative taken at Gamma, then the formulas above).
DensityHierarchy vector_field_n(const PolynomialFunctional& h, const DensityHierarchy& gamma,
                                int n);
DensityHierarchy vector_field_inf(const PolynomialFunctional& h, const DensityHierarchy& gamma,
                                  int k_out);

// Lie-Poisson bracket {F,G}(Gamma) = i Tr([dF, dG] . Gamma); the context of
// the functionals selects bracket_n or bracket_inf.
double poisson_bracket(const PolynomialFunctional& f, const PolynomialFunctional& g,
                       const DensityHierarchy& gamma);

}  // namespace hierakit
