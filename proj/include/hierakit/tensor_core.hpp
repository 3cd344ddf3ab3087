#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

// Dense complex multi-particle operator algebra.
//
// Conventions used throughout the library:
//   * A k-particle operator on a one-particle space of dimension d is a dense
//     d^k x d^k matrix.  The flattened tensor index enumerates k-tuples
//     (i_1,...,i_k) with i_1 slowest-varying, so tensor_product(A, B) places
//     A on the leading particles and coincides with the usual Kronecker
//     product.
//   * Operators act on coefficient vectors by plain matrix-vector product.
//     Rank-one densities |f><g| are stored as the plain outer product
//     f g^dagger (their integral kernel f(x) conj(g(x'))).  All quadrature
//     weights live in trace_pair / partial_trace / inner products, never in
//     the matrices themselves, so the adjoint is the conjugate transpose.
//   * Permutations pi of {1..k} are stored 0-based as vectors p with
//     p[i] = pi(i+1)-1.  The operator P_pi acts by (P_pi f)(x_1,...,x_k) =
//     f(x_{pi(1)},...,x_{pi(k)}), and P_pi P_sigma = P_{pi o sigma}.

namespace hierakit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Permutation = std::vector<int>;

// Guard against accidentally materializing huge dense matrices.  Functions
// that build a d^k-dimensional space throw when d^k exceeds this value.
std::size_t& dense_dim_guard();  // mutable global, default 4096

// d^k with overflow and guard checks.
std::size_t checked_dim(int d, int k);

// Uniform quadrature weight per one-particle index.
struct Weights {
  double h = 1.0;

  double particle(int k) const;  // h^k
};

// Neumaier compensated accumulator, for reductions with heavy cancellation
// (trace pairings, spectral kernels).
struct CompensatedSum {
  double sum = 0.0, comp = 0.0;

  void add(double v);
  double value() const { return sum + comp; }
};

struct KOperator {
  int k = 1;    // particle count
  int d = 1;    // one-particle dimension
  Matrix data;  // d^k x d^k

  KOperator() = default;
  KOperator(int k_, int d_, Matrix m);

  Eigen::Index dim() const { return data.rows(); }

  KOperator adjoint() const;
  double max_norm() const;  // max |entry|
  bool is_self_adjoint(double tol = 1e-12) const;
  bool is_skew_adjoint(double tol = 1e-12) const;
  // Checks P_pi A P_pi^{-1} = A for every pi in S_k (factorial cost).
  bool is_bosonic(double tol = 1e-12) const;

  KOperator& operator+=(const KOperator& rhs);
  KOperator& operator-=(const KOperator& rhs);
  KOperator& operator*=(Complex c);
};

KOperator operator+(KOperator a, const KOperator& b);
KOperator operator-(KOperator a, const KOperator& b);
KOperator operator*(Complex c, KOperator a);
KOperator operator*(const KOperator& a, const KOperator& b);  // composition

KOperator identity_op(int d, int k);
KOperator zero_op(int d, int k);

// A on the leading particles of the product space, B on the trailing ones.
KOperator tensor_product(const KOperator& a, const KOperator& b);
Vector tensor_product_vec(const Vector& a, const Vector& b);
Vector tensor_power_vec(const Vector& a, int k);

// Flat-index helpers (digit i_1 slowest-varying).
void decompose_index(std::size_t flat, int d, int k, int* digits);
std::size_t compose_index(const int* digits, int d, int k);

// All elements of S_k in lexicographic order.
std::vector<Permutation> all_permutations(int k);
// Ordered r-tuples of distinct elements of {0,...,n-1}, lexicographic.
// Size is r! * binom(n, r).
std::vector<std::vector<int>> ordered_tuples(int r, int n);
long long binomial(int n, int r);

// Matrix of P_pi on the d^k space.
KOperator permutation_operator(int d, const Permutation& pi);
// tau o A o tau^{-1}; index relabelling of the particles of A.
KOperator permute_conjugate(const KOperator& a, const Permutation& tau);
// Composition pi o sigma (as maps on {1..k}).
Permutation compose_permutations(const Permutation& pi, const Permutation& sigma);
Permutation inverse_permutation(const Permutation& pi);

// A acting on the given (distinct, 0-based) slots of a k_target-particle
// space, identity elsewhere.
KOperator extend(const KOperator& a, const std::vector<int>& slots, int k_target);
// Same operator built through an auxiliary permutation pi with
// pi(slots[j]) = j; used to test independence of the permutation choice.
KOperator extend_via_permutation(const KOperator& a, const std::vector<int>& slots,
                                 int k_target, const Permutation& pi);

// Bosonic symmetrization (1/k!) sum_pi P_pi A P_pi^{-1}.
KOperator sym_op(const KOperator& a);
// Symmetric projection of a k-particle coefficient vector.
Vector sym_vec(const Vector& f, int d, int k);

// Weighted trace pairing h^k tr(A gamma).  For gamma = |f><g| this is the
// weighted inner product <g, A f>.
Complex trace_pair(const KOperator& a, const KOperator& gamma, const Weights& w);

// Weighted matrix element <u, A v> = h^k sum conj(u) A v, compensated; equals
// trace_pair(A, |v><u|, w) without materializing the rank-one density.
Complex matrix_element(const Vector& u, const KOperator& a, const Vector& v, const Weights& w);

// Weighted inner product h^k sum conj(f) g and the rank-one kernel f g^dagger.
Complex inner(const Vector& f, const Vector& g, const Weights& w, int k);
KOperator ket_bra(const Vector& f, const Vector& g, int d, int k);

// Trace over particles keep+1..k with quadrature weight h^(k-keep).
// keep == k returns the operator unchanged.
KOperator partial_trace(const KOperator& m, int keep, const Weights& w);

// r-fold contraction: A extended to slots (1..l) composed with the sum of B
// extended to slots (alpha_1..alpha_r, l+1..l+j-r) over ordered r-tuples
// alpha of distinct elements of {1..l}, on a k_target-particle space.
KOperator contract_r(const KOperator& a, const KOperator& b, int r, int k_target);

// binom(j,r) A o_r B - binom(l,r) B o_r A.
KOperator comm_r(const KOperator& a, const KOperator& b, int r, int k_target);

}  // namespace hierakit
