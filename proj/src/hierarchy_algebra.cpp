#include "hierakit/hierarchy_algebra.hpp"

#include <algorithm>
#include <numeric>

namespace hierakit {

int ObservableHierarchy::max_support() const {
  return entries.empty() ? 0 : entries.rbegin()->first;
}

double ObservableHierarchy::invariant_residual() const {
  double res = 0.0;
  for (const auto& [k, op] : entries) {
    res = std::max(res, (op.data + op.data.adjoint()).cwiseAbs().maxCoeff());
    for (const auto& pi : all_permutations(k))
      res = std::max(res, (permute_conjugate(op, pi).data - op.data).cwiseAbs().maxCoeff());
  }
  return res;
}

ObservableHierarchy& ObservableHierarchy::operator+=(const ObservableHierarchy& rhs) {
  for (const auto& [k, op] : rhs.entries) {
    auto it = entries.find(k);
    if (it == entries.end()) entries.emplace(k, op);
    else it->second += op;
  }
  return *this;
}

ObservableHierarchy& ObservableHierarchy::operator*=(double c) {
  for (auto& [k, op] : entries) op *= Complex(c);
  return *this;
}

ObservableHierarchy operator+(ObservableHierarchy a, const ObservableHierarchy& b) {
  return a += b;
}
ObservableHierarchy operator*(double c, ObservableHierarchy a) { return a *= c; }

int DensityHierarchy::max_support() const { return entries.empty() ? 0 : entries.rbegin()->first; }

double DensityHierarchy::invariant_residual() const {
  double res = 0.0;
  for (const auto& [k, op] : entries) {
    res = std::max(res, (op.data - op.data.adjoint()).cwiseAbs().maxCoeff());
    for (const auto& pi : all_permutations(k))
      res = std::max(res, (permute_conjugate(op, pi).data - op.data).cwiseAbs().maxCoeff());
  }
  return res;
}

DensityHierarchy& DensityHierarchy::operator+=(const DensityHierarchy& rhs) {
  for (const auto& [k, op] : rhs.entries) {
    auto it = entries.find(k);
    if (it == entries.end()) entries.emplace(k, op);
    else it->second += op;
  }
  return *this;
}

DensityHierarchy& DensityHierarchy::operator*=(double c) {
  for (auto& [k, op] : entries) op *= Complex(c);
  return *this;
}

DensityHierarchy operator+(DensityHierarchy a, const DensityHierarchy& b) { return a += b; }

DensityHierarchy operator-(const DensityHierarchy& a, const DensityHierarchy& b) {
  DensityHierarchy out = a;
  DensityHierarchy neg = b;
  neg *= -1.0;
  return out += neg;
}

DensityHierarchy operator*(double c, DensityHierarchy a) { return a *= c; }

double sup_max_norm(const DensityHierarchy& g) {
  double out = 0.0;
  for (const auto& [k, op] : g.entries) out = std::max(out, op.max_norm());
  return out;
}

double sup_max_norm(const ObservableHierarchy& g) {
  double out = 0.0;
  for (const auto& [k, op] : g.entries) out = std::max(out, op.max_norm());
  return out;
}

namespace {

long long checked_mul(long long a, long long b) {
  if (a != 0 && std::abs(b) > std::numeric_limits<long long>::max() / std::abs(a))
    throw std::overflow_error("BracketCoefficients: integer overflow");
  return a * b;
}

}  // namespace

Rational BracketCoefficients::c_kn(int k, long long n) {
  if (k < 1 || k > n) throw std::invalid_argument("c_kn: need 1 <= k <= N");
  long long denom = 1;
  for (long long m = 0; m < k; ++m) denom = checked_mul(denom, n - m);
  return Rational(1, denom);
}

int BracketCoefficients::r_min(int l, int j, long long n) {
  const int lo = std::min(l, j), hi = std::max(l, j);
  return std::max(1LL, static_cast<long long>(lo) - (n - hi));
}

Rational BracketCoefficients::coeff(int l, int j, int k, int r) const {
  if (k != std::min<long long>(l + j - 1, n))
    throw std::invalid_argument("coeff: k != min(l+j-1, N)");
  if (r < r_min(l, j, n) || r > std::min(l, j)) throw std::invalid_argument("coeff: r out of range");
  Rational out = Rational(n) * c_kn(l, n) * c_kn(j, n) / c_kn(k, n);
  const int extra = k - l - j + r;  // slots untouched by the contraction
  for (int m = 1; m <= extra; ++m) out /= Rational(n - k + m);
  return out;
}

Rational BracketCoefficients::coeff_primed(int l, int j, int k, int r) const {
  return Rational(binomial(j, r)) * coeff(l, j, k, r);
}

KOperator epsilon(const KOperator& a, int n) {
  if (a.k > n) throw std::invalid_argument("epsilon: k > N");
  KOperator acc = zero_op(a.d, n);
  const auto tuples = ordered_tuples(a.k, n);
  for (const auto& t : tuples) acc += extend(a, t, n);
  acc *= Complex(1.0 / static_cast<double>(tuples.size()));
  return acc;
}

KOperator iota_epsilon(const ObservableHierarchy& a, int n) {
  if (a.entries.empty()) throw std::invalid_argument("iota_epsilon: empty hierarchy");
  if (a.max_support() > n) throw std::invalid_argument("iota_epsilon: support exceeds N");
  const int d = a.entries.begin()->second.d;
  KOperator acc = zero_op(d, n);
  for (const auto& [k, op] : a.entries) acc += epsilon(op, n);
  return acc;
}

namespace {

double coeff_value(const BracketCoefficients& coeffs, int l, int j, int k, int r,
                   const BracketOptions& opts) {
  double v = boost::rational_cast<double>(coeffs.coeff(l, j, k, r));
  if (opts.corrupt_coefficient != 0.0 && l == 1 && j == 2) v += opts.corrupt_coefficient;
  return v;
}

}  // namespace

ObservableHierarchy bracket_n(const ObservableHierarchy& a, const ObservableHierarchy& b, int n,
                              const BracketOptions& opts) {
  if (a.max_support() > n || b.max_support() > n)
    throw std::invalid_argument("bracket_n: hierarchy support exceeds N");
  const BracketCoefficients coeffs{n};
  ObservableHierarchy out;
  out.finite_n = n;
  for (const auto& [l, al] : a.entries) {
    for (const auto& [j, bj] : b.entries) {
      const int k = std::min(l + j - 1, n);
      KOperator term = zero_op(al.d, k);
      for (int r = BracketCoefficients::r_min(l, j, n); r <= std::min(l, j); ++r) {
        KOperator c = comm_r(al, bj, r, k);
        c *= Complex(coeff_value(coeffs, l, j, k, r, opts));
        term += c;
      }
      term = sym_op(term);
      auto it = out.entries.find(k);
      if (it == out.entries.end()) out.entries.emplace(k, std::move(term));
      else it->second += term;
    }
  }
  return out;
}

ObservableHierarchy bracket_inf(const ObservableHierarchy& a, const ObservableHierarchy& b) {
  ObservableHierarchy out;
  for (const auto& [l, al] : a.entries) {
    for (const auto& [j, bj] : b.entries) {
      const int k = l + j - 1;
      KOperator term = sym_op(comm_r(al, bj, 1, k));
      auto it = out.entries.find(k);
      if (it == out.entries.end()) out.entries.emplace(k, std::move(term));
      else it->second += term;
    }
  }
  return out;
}

double dot_trace(const ObservableHierarchy& a, const DensityHierarchy& gamma) {
  Complex acc = 0.0;
  for (const auto& [k, op] : a.entries) {
    auto it = gamma.entries.find(k);
    if (it == gamma.entries.end()) continue;
    acc += Complex(0.0, 1.0) * trace_pair(op, it->second, gamma.weights);
  }
  return acc.real();
}

double dot_trace_imag_residual(const ObservableHierarchy& a, const DensityHierarchy& gamma) {
  Complex acc = 0.0;
  for (const auto& [k, op] : a.entries) {
    auto it = gamma.entries.find(k);
    if (it == gamma.entries.end()) continue;
    acc += Complex(0.0, 1.0) * trace_pair(op, it->second, gamma.weights);
  }
  return std::abs(acc.imag());
}

namespace {

// sum_{alpha in P_r^l} D_(alpha, l+1, ..., l+j-r) on a k-particle space.
KOperator extension_sum(const KOperator& dj, int l, int r, int k) {
  KOperator acc = zero_op(dj.d, k);
  for (const auto& alpha : ordered_tuples(r, l)) {
    std::vector<int> slots = alpha;
    for (int s = 0; s < dj.k - r; ++s) slots.push_back(l + s);
    acc += extend(dj, slots, k);
  }
  return acc;
}

}  // namespace

DensityHierarchy vector_field_n_from_generator(const ObservableHierarchy& d,
                                               const DensityHierarchy& gamma, int n,
                                               const BracketOptions& opts) {
  if (d.max_support() > n) throw std::invalid_argument("vector_field_n: generator support > N");
  if (gamma.max_support() < n)
    throw std::invalid_argument("vector_field_n: density hierarchy lacks components up to N");
  const BracketCoefficients coeffs{n};
  DensityHierarchy out;
  out.weights = gamma.weights;
  for (int l = 1; l <= n; ++l) {
    const KOperator& gl = gamma.at(l);
    KOperator acc = zero_op(gl.d, l);
    for (const auto& [j, dj] : d.entries) {
      const int k = std::min(l + j - 1, n);
      const KOperator& gk = gamma.at(k);
      for (int r = BracketCoefficients::r_min(l, j, n); r <= std::min(l, j); ++r) {
        double c = boost::rational_cast<double>(coeffs.coeff_primed(l, j, k, r));
        if (opts.corrupt_coefficient != 0.0 && l == 1 && j == 2) c += opts.corrupt_coefficient;
        const KOperator s = extension_sum(dj, l, r, k);
        KOperator comm = s * gk - gk * s;
        comm *= Complex(c);
        acc += partial_trace(comm, l, gamma.weights);
      }
    }
    out.entries.emplace(l, std::move(acc));
  }
  return out;
}

DensityHierarchy vector_field_inf_from_generator(const ObservableHierarchy& d,
                                                 const DensityHierarchy& gamma, int k_out) {
  DensityHierarchy out;
  out.weights = gamma.weights;
  for (int l = 1; l <= k_out; ++l) {
    KOperator acc;
    bool first = true;
    for (const auto& [j, dj] : d.entries) {
      const int k = l + j - 1;
      auto it = gamma.entries.find(k);
      if (it == gamma.entries.end())
        throw std::out_of_range("vector_field_inf: hierarchy depth exhausted (need gamma^(" +
                                std::to_string(k) + "))");
      const KOperator& gk = it->second;
      const KOperator s = extension_sum(dj, l, 1, k);
      KOperator comm = s * gk - gk * s;
      comm *= Complex(static_cast<double>(j));
      KOperator term = partial_trace(comm, l, gamma.weights);
      if (first) {
        acc = std::move(term);
        first = false;
      } else {
        acc += term;
      }
    }
    if (first) acc = zero_op(gamma.entries.begin()->second.d, l);
    out.entries.emplace(l, std::move(acc));
  }
  return out;
}

}  // namespace hierakit
