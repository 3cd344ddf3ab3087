#include "hierakit/functional_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace hierakit {

PolynomialFunctional PolynomialFunctional::constant(double c, Context ctx, int n) {
  PolynomialFunctional f;
  f.context_ = ctx;
  f.n_ = n;
  f.monomials_.push_back(Monomial{c, {}});
  return f;
}

PolynomialFunctional PolynomialFunctional::trace_functional(ObservableHierarchy generator,
                                                            Context ctx, int n) {
  PolynomialFunctional f;
  f.context_ = ctx;
  f.n_ = n;
  f.monomials_.push_back(Monomial{1.0, {std::move(generator)}});
  return f;
}

int PolynomialFunctional::max_generator_support() const {
  int out = 0;
  for (const auto& m : monomials_)
    for (const auto& a : m.factors) out = std::max(out, a.max_support());
  return out;
}

PolynomialFunctional& PolynomialFunctional::operator+=(const PolynomialFunctional& rhs) {
  if (!rhs.monomials_.empty() && !monomials_.empty() &&
      (rhs.context_ != context_ || rhs.n_ != n_))
    throw std::invalid_argument("PolynomialFunctional +=: context mismatch");
  if (monomials_.empty()) {
    context_ = rhs.context_;
    n_ = rhs.n_;
  }
  monomials_.insert(monomials_.end(), rhs.monomials_.begin(), rhs.monomials_.end());
  return *this;
}

PolynomialFunctional& PolynomialFunctional::operator*=(double c) {
  for (auto& m : monomials_) m.coeff *= c;
  return *this;
}

PolynomialFunctional PolynomialFunctional::operator*(const PolynomialFunctional& rhs) const {
  if (!rhs.monomials_.empty() && !monomials_.empty() &&
      (rhs.context_ != context_ || rhs.n_ != n_))
    throw std::invalid_argument("PolynomialFunctional *: context mismatch");
  PolynomialFunctional out;
  out.context_ = monomials_.empty() ? rhs.context_ : context_;
  out.n_ = monomials_.empty() ? rhs.n_ : n_;
  for (const auto& a : monomials_)
    for (const auto& b : rhs.monomials_) {
      Monomial m;
      m.coeff = a.coeff * b.coeff;
      m.factors = a.factors;
      m.factors.insert(m.factors.end(), b.factors.begin(), b.factors.end());
      out.monomials_.push_back(std::move(m));
    }
  return out;
}

PolynomialFunctional operator+(PolynomialFunctional a, const PolynomialFunctional& b) {
  return a += b;
}

PolynomialFunctional operator*(double c, PolynomialFunctional a) { return a *= c; }

double evaluate(const PolynomialFunctional& f, const DensityHierarchy& gamma) {
  double acc = 0.0;
  for (const auto& m : f.monomials()) {
    double term = m.coeff;
    for (const auto& a : m.factors) term *= dot_trace(a, gamma);
    acc += term;
  }
  return acc;
}

double evaluate_imag_residual(const PolynomialFunctional& f, const DensityHierarchy& gamma) {
  double res = 0.0;
  for (const auto& m : f.monomials())
    for (const auto& a : m.factors)
      res = std::max(res, dot_trace_imag_residual(a, gamma));
  return res;
}

double evaluate_pullback(const PolynomialFunctional& f, const WaveFunction& phi) {
  if (phi.particles != 1)
    throw std::invalid_argument("evaluate_pullback: expects a one-particle state");
  const Weights w = phi.grid.weights();
  const int k_max = f.max_generator_support();
  std::vector<Vector> powers(k_max + 1);
  if (k_max >= 1) powers[1] = phi.values;
  for (int k = 2; k <= k_max; ++k) powers[k] = tensor_product_vec(powers[k - 1], phi.values);

  double acc = 0.0;
  for (const auto& m : f.monomials()) {
    double term = m.coeff;
    for (const auto& a : m.factors) {
      Complex tr = 0.0;
      for (const auto& [k, op] : a.entries)
        tr += Complex(0, 1) * matrix_element(powers[k], op, powers[k], w);
      term *= tr.real();
    }
    acc += term;
  }
  return acc;
}

ObservableHierarchy gateaux_derivative(const PolynomialFunctional& f,
                                       const DensityHierarchy& gamma) {
  ObservableHierarchy out;
  if (f.context() == PolynomialFunctional::Context::FiniteN) out.finite_n = f.n_particles();
  for (const auto& m : f.monomials()) {
    const std::size_t nf = m.factors.size();
    for (std::size_t b = 0; b < nf; ++b) {
      double scale = m.coeff;
      for (std::size_t b2 = 0; b2 < nf; ++b2)
        if (b2 != b) scale *= dot_trace(m.factors[b2], gamma);
      if (scale == 0.0) continue;
      out += scale * m.factors[b];
    }
  }
  return out;
}

PolynomialFunctional poisson_bracket_functional(const PolynomialFunctional& f,
                                                const PolynomialFunctional& g) {
  if (f.context_ != g.context_ || f.n_ != g.n_)
    throw std::invalid_argument("poisson_bracket_functional: context mismatch");
  PolynomialFunctional out;
  out.context_ = f.context_;
  out.n_ = f.n_;
  const bool finite = f.context_ == PolynomialFunctional::Context::FiniteN;
  for (const auto& ma : f.monomials_)
    for (const auto& mb : g.monomials_)
      for (std::size_t b = 0; b < ma.factors.size(); ++b)
        for (std::size_t e = 0; e < mb.factors.size(); ++e) {
          PolynomialFunctional::Monomial m;
          m.coeff = ma.coeff * mb.coeff;
          for (std::size_t i = 0; i < ma.factors.size(); ++i)
            if (i != b) m.factors.push_back(ma.factors[i]);
          for (std::size_t i = 0; i < mb.factors.size(); ++i)
            if (i != e) m.factors.push_back(mb.factors[i]);
          m.factors.push_back(finite ? bracket_n(ma.factors[b], mb.factors[e], f.n_)
                                     : bracket_inf(ma.factors[b], mb.factors[e]));
          out.monomials_.push_back(std::move(m));
        }
  return out;
}

double poisson_bracket(const PolynomialFunctional& f, const PolynomialFunctional& g,
                       const DensityHierarchy& gamma) {
  if (f.context() != g.context() || f.n_particles() != g.n_particles())
    throw std::invalid_argument("poisson_bracket: context mismatch");
  const ObservableHierarchy df = gateaux_derivative(f, gamma);
  const ObservableHierarchy dg = gateaux_derivative(g, gamma);
  if (df.entries.empty() || dg.entries.empty()) return 0.0;
  const ObservableHierarchy br = f.context() == PolynomialFunctional::Context::FiniteN
                                     ? bracket_n(df, dg, f.n_particles())
                                     : bracket_inf(df, dg);
  return dot_trace(br, gamma);
}

DensityHierarchy vector_field_n(const PolynomialFunctional& h, const DensityHierarchy& gamma,
                                int n) {
  const ObservableHierarchy d = gateaux_derivative(h, gamma);
  if (d.entries.empty()) {
    DensityHierarchy out;
    out.weights = gamma.weights;
    for (const auto& [k, g] : gamma.entries)
      if (k <= n) out.entries.emplace(k, zero_op(g.d, k));
    return out;
  }
  return vector_field_n_from_generator(d, gamma, n);
}

DensityHierarchy vector_field_inf(const PolynomialFunctional& h, const DensityHierarchy& gamma,
                                  int k_out) {
  const ObservableHierarchy d = gateaux_derivative(h, gamma);
  if (d.entries.empty()) {
    DensityHierarchy out;
    out.weights = gamma.weights;
    for (const auto& [k, g] : gamma.entries)
      if (k <= k_out) out.entries.emplace(k, zero_op(g.d, k));
    return out;
  }
  return vector_field_inf_from_generator(d, gamma, k_out);
}

double SymplecticForm::operator()(const Vector& f, const Vector& g) const {
  return 2.0 * inner(f, g, weights, particles).imag();
}

double omega_l2(const WaveFunction& f, const WaveFunction& g) {
  if (f.particles != g.particles || f.grid.n != g.grid.n)
    throw std::invalid_argument("omega_l2: shape mismatch");
  return 2.0 * inner(f, g).imag();
}

double pb_l2(const WaveFunction& f_grad, const WaveFunction& g_grad) {
  return omega_l2(f_grad, g_grad);
}

double pb_l2_scaled(const WaveFunction& f_grad, const WaveFunction& g_grad, int n) {
  return n * omega_l2(f_grad, g_grad);
}

WaveFunction symplectic_gradient_pullback(const PolynomialFunctional& f, const WaveFunction& phi) {
  if (phi.particles != 1)
    throw std::invalid_argument("symplectic_gradient_pullback: expects a one-particle state");
  const int d = phi.grid.n;
  const double h = phi.grid.h();
  Vector psi = Vector::Zero(d);
  const int k_max = f.max_generator_support();
  if (k_max == 0) return WaveFunction{1, phi.grid, std::move(psi)};

  const DensityHierarchy gamma = iota_fact(phi, k_max);
  const ObservableHierarchy deriv = gateaux_derivative(f, gamma);

  std::vector<int> digits(k_max);
  for (const auto& [k, dk] : deriv.entries) {
    const Vector u = dk.data * tensor_power_vec(phi.values, k);
    const double hk1 = Weights{h}.particle(k - 1);
    const std::size_t dim = static_cast<std::size_t>(u.size());
    std::vector<Complex> prefix(k + 1), suffix(k + 1);
    for (std::size_t idx = 0; idx < dim; ++idx) {
      decompose_index(idx, d, k, digits.data());
      // products of conj(phi) over digits before / after each slot
      prefix[0] = 1.0;
      for (int s = 0; s < k; ++s) prefix[s + 1] = prefix[s] * std::conj(phi.values(digits[s]));
      suffix[k] = 1.0;
      for (int s = k - 1; s >= 0; --s) suffix[s] = suffix[s + 1] * std::conj(phi.values(digits[s]));
      for (int alpha = 0; alpha < k; ++alpha)
        psi(digits[alpha]) += hk1 * prefix[alpha] * suffix[alpha + 1] * u(idx);
    }
  }
  return WaveFunction{1, phi.grid, std::move(psi)};
}

WaveFunction symplectic_gradient_dm(const PolynomialFunctional& f, const WaveFunction& phi_n) {
  const int n = phi_n.particles;
  if (f.context() != PolynomialFunctional::Context::FiniteN || f.n_particles() != n)
    throw std::invalid_argument("symplectic_gradient_dm: functional not in the N-body context");
  const KOperator psi = iota_dm(phi_n);
  const DensityHierarchy gamma = iota_rdm(psi, phi_n.grid.weights());
  const ObservableHierarchy deriv = gateaux_derivative(f, gamma);
  if (deriv.entries.empty())
    return WaveFunction{n, phi_n.grid, Vector::Zero(phi_n.values.size())};
  const KOperator a = iota_epsilon(deriv, n);
  return WaveFunction{n, phi_n.grid, a.data * phi_n.values};
}

namespace {

// Central differences along every coordinate direction.  On multi-particle
// states the admissible variations are the bosonic ones, so the probe
// directions are symmetrized; since the analytic gradient is itself bosonic,
// omega(psi, Sym e_m) = omega(psi, e_m) and the reconstruction is unchanged.
GradientReport fd_report(const WaveFunction& phi, const Vector& analytic,
                         const std::function<double(const Vector&)>& eval, double step) {
  const int d = phi.grid.n, k = phi.particles;
  const double hk = phi.grid.weights().particle(k);
  Vector fd(analytic.size());
  for (Eigen::Index m = 0; m < analytic.size(); ++m) {
    Vector dir = Vector::Zero(analytic.size());
    dir(m) = 1.0;
    if (k > 1) dir = sym_vec(dir, d, k);
    const double fp = eval(phi.values + step * dir);
    const double fm = eval(phi.values - step * dir);
    const double fip = eval(phi.values + Complex(0.0, step) * dir);
    const double fim = eval(phi.values - Complex(0.0, step) * dir);
    const double d_re = (fp - fm) / (2.0 * step);    // = omega(psi, e_m)
    const double d_im = (fip - fim) / (2.0 * step);  // = omega(psi, i e_m)
    fd(m) = Complex(d_im / (2.0 * hk), -d_re / (2.0 * hk));
  }
  GradientReport rep;
  rep.analytic = analytic;
  rep.finite_difference = fd;
  const double scale = std::max(analytic.cwiseAbs().maxCoeff(), 1e-12);
  rep.max_rel_deviation = (fd - analytic).cwiseAbs().maxCoeff() / scale;
  return rep;
}

}  // namespace

GradientReport gradient_report_pullback(const PolynomialFunctional& f, const WaveFunction& phi,
                                        double step) {
  const WaveFunction psi = symplectic_gradient_pullback(f, phi);
  const int k_max = std::max(f.max_generator_support(), 1);
  auto eval = [&](const Vector& v) {
    WaveFunction w{1, phi.grid, v};
    return evaluate(f, iota_fact(w, k_max));
  };
  return fd_report(phi, psi.values, eval, step);
}

GradientReport gradient_report_dm(const PolynomialFunctional& f, const WaveFunction& phi_n,
                                  double step) {
  const WaveFunction psi = symplectic_gradient_dm(f, phi_n);
  auto eval = [&](const Vector& v) {
    WaveFunction w{phi_n.particles, phi_n.grid, v};
    return evaluate(f, iota_rdm(iota_dm(w), phi_n.grid.weights()));
  };
  return fd_report(phi_n, psi.values, eval, step);
}

double gateaux_fd_error(const PolynomialFunctional& f, const DensityHierarchy& gamma,
                        const std::vector<DensityHierarchy>& directions, double step) {
  const ObservableHierarchy deriv = gateaux_derivative(f, gamma);
  double worst = 0.0;
  for (const auto& v : directions) {
    const double analytic = deriv.entries.empty() ? 0.0 : dot_trace(deriv, v);
    DensityHierarchy plus = gamma, minus = gamma;
    plus += step * v;
    minus += (-step) * v;
    const double fd = (evaluate(f, plus) - evaluate(f, minus)) / (2.0 * step);
    const double scale = std::max(std::abs(analytic), 1.0);
    worst = std::max(worst, std::abs(fd - analytic) / scale);
  }
  return worst;
}

}  // namespace hierakit
