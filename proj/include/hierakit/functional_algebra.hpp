#pragma once

#include "hierakit/hierarchy_algebra.hpp"
#include "hierakit/models_1d.hpp"

// Polynomial algebras of trace functionals on density hierarchies, their
// Gateaux derivatives, and the weighted L^2 symplectic structure with its
// gradients on wave functions.

namespace hierakit {

// Real polynomial in the generators Gamma -> i Tr(A . Gamma); a monomial is a
// coefficient times a (possibly empty) product of such trace functionals.
class PolynomialFunctional {
 public:
  enum class Context { FiniteN, Infinite };

  struct Monomial {
    double coeff = 1.0;
    std::vector<ObservableHierarchy> factors;
  };

  PolynomialFunctional() = default;  // the zero functional

  static PolynomialFunctional constant(double c, Context ctx = Context::Infinite, int n = 0);
  static PolynomialFunctional trace_functional(ObservableHierarchy generator,
                                               Context ctx = Context::Infinite, int n = 0);

  Context context() const { return context_; }
  int n_particles() const { return n_; }
  const std::vector<Monomial>& monomials() const { return monomials_; }
  int max_generator_support() const;

  PolynomialFunctional& operator+=(const PolynomialFunctional& rhs);
  PolynomialFunctional& operator*=(double c);
  // Pointwise product of functionals.
  PolynomialFunctional operator*(const PolynomialFunctional& rhs) const;

 private:
  std::vector<Monomial> monomials_;
  Context context_ = Context::Infinite;
  int n_ = 0;

  friend PolynomialFunctional poisson_bracket_functional(const PolynomialFunctional&,
                                                         const PolynomialFunctional&);
};

PolynomialFunctional operator+(PolynomialFunctional a, const PolynomialFunctional& b);
PolynomialFunctional operator*(double c, PolynomialFunctional a);

double evaluate(const PolynomialFunctional& f, const DensityHierarchy& gamma);
double evaluate_imag_residual(const PolynomialFunctional& f, const DensityHierarchy& gamma);

// F(iota_fact(phi)) computed through matrix elements <phi^(x)k, A phi^(x)k>
// instead of materializing the factorized hierarchy; agrees with
// evaluate(f, iota_fact(phi, k_max)) by the rank-one trace identity.
double evaluate_pullback(const PolynomialFunctional& f, const WaveFunction& phi);

// dF[Gamma] as a skew-adjoint hierarchy; constant in Gamma for pure trace
// functionals, Leibniz-expanded for products.
ObservableHierarchy gateaux_derivative(const PolynomialFunctional& f,
                                       const DensityHierarchy& gamma);

// {F,G} as an element of the same polynomial algebra (the bracketed
// generators become new generators); enables nested brackets.
PolynomialFunctional poisson_bracket_functional(const PolynomialFunctional& f,
                                                const PolynomialFunctional& g);

// omega(f,g) = 2 Im <f,g> with the weighted inner product.
struct SymplecticForm {
  Weights weights;
  int particles = 1;

  double operator()(const Vector& f, const Vector& g) const;
};

double omega_l2(const WaveFunction& f, const WaveFunction& g);
// {F,G}_{L^2} evaluated on precomputed symplectic gradients.
double pb_l2(const WaveFunction& f_grad, const WaveFunction& g_grad);
double pb_l2_scaled(const WaveFunction& f_grad, const WaveFunction& g_grad, int n);

// Symplectic gradient of F composed with the factorized embedding:
// psi_F = sum_k psi_{F,k}, each psi_{F,k} obtained by applying dF[iota(phi)]^(k)
// to phi^(x)k and contracting against k-1 copies of phi in every slot.
WaveFunction symplectic_gradient_pullback(const PolynomialFunctional& f, const WaveFunction& phi);

// Symplectic gradient of F composed with the density-matrix (and reduced
// density) embeddings: the derivative hierarchy embedded into N-particle
// observables and applied to Phi_N.
WaveFunction symplectic_gradient_dm(const PolynomialFunctional& f, const WaveFunction& phi_n);

struct GradientReport {
  Vector analytic;
  Vector finite_difference;
  double max_rel_deviation = 0.0;
};

// Full finite-difference reconstruction of the gradients above (central
// differences along every real and imaginary coordinate direction).
GradientReport gradient_report_pullback(const PolynomialFunctional& f, const WaveFunction& phi,
                                        double step = 1e-5);
GradientReport gradient_report_dm(const PolynomialFunctional& f, const WaveFunction& phi_n,
                                  double step = 1e-5);

// Central-difference check of the Gateaux derivative along the supplied
// self-adjoint directions; returns the maximum relative error.
double gateaux_fd_error(const PolynomialFunctional& f, const DensityHierarchy& gamma,
                        const std::vector<DensityHierarchy>& directions, double step = 1e-5);

}  // namespace hierakit
