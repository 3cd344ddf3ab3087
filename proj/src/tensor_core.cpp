#include "hierakit/tensor_core.hpp"

#include <algorithm>
#include <numeric>

namespace hierakit {

std::size_t& dense_dim_guard() {
  static std::size_t guard = 4096;
  return guard;
}

std::size_t checked_dim(int d, int k) {
  if (d < 1 || k < 1) throw std::invalid_argument("checked_dim: need d >= 1, k >= 1");
  std::size_t dim = 1;
  for (int i = 0; i < k; ++i) {
    if (dim > dense_dim_guard() / static_cast<std::size_t>(d) + 1) dim = dense_dim_guard() + 1;
    else dim *= static_cast<std::size_t>(d);
    if (dim > dense_dim_guard())
      throw std::length_error("checked_dim: d^k exceeds dense dimension guard (" +
                              std::to_string(dense_dim_guard()) + ")");
  }
  return dim;
}

double Weights::particle(int k) const {
  double w = 1.0;
  for (int i = 0; i < k; ++i) w *= h;
  return w;
}

KOperator::KOperator(int k_, int d_, Matrix m) : k(k_), d(d_), data(std::move(m)) {
  const auto dim = checked_dim(d, k);
  if (data.rows() != static_cast<Eigen::Index>(dim) || data.cols() != data.rows())
    throw std::invalid_argument("KOperator: matrix shape does not match d^k x d^k");
}

KOperator KOperator::adjoint() const { return KOperator(k, d, data.adjoint()); }

double KOperator::max_norm() const { return data.size() == 0 ? 0.0 : data.cwiseAbs().maxCoeff(); }

bool KOperator::is_self_adjoint(double tol) const {
  return (data - data.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool KOperator::is_skew_adjoint(double tol) const {
  return (data + data.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool KOperator::is_bosonic(double tol) const {
  for (const auto& pi : all_permutations(k)) {
    if ((permute_conjugate(*this, pi).data - data).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

KOperator& KOperator::operator+=(const KOperator& rhs) {
  if (k != rhs.k || d != rhs.d) throw std::invalid_argument("KOperator +=: shape mismatch");
  data += rhs.data;
  return *this;
}

KOperator& KOperator::operator-=(const KOperator& rhs) {
  if (k != rhs.k || d != rhs.d) throw std::invalid_argument("KOperator -=: shape mismatch");
  data -= rhs.data;
  return *this;
}

KOperator& KOperator::operator*=(Complex c) {
  data *= c;
  return *this;
}

KOperator operator+(KOperator a, const KOperator& b) { return a += b; }
KOperator operator-(KOperator a, const KOperator& b) { return a -= b; }
KOperator operator*(Complex c, KOperator a) { return a *= c; }

KOperator operator*(const KOperator& a, const KOperator& b) {
  if (a.k != b.k || a.d != b.d) throw std::invalid_argument("KOperator *: shape mismatch");
  return KOperator(a.k, a.d, a.data * b.data);
}

KOperator identity_op(int d, int k) {
  const auto dim = checked_dim(d, k);
  return KOperator(k, d, Matrix::Identity(dim, dim));
}

KOperator zero_op(int d, int k) {
  const auto dim = checked_dim(d, k);
  return KOperator(k, d, Matrix::Zero(dim, dim));
}

KOperator tensor_product(const KOperator& a, const KOperator& b) {
  if (a.d != b.d) throw std::invalid_argument("tensor_product: one-particle dimensions differ");
  const auto dim = checked_dim(a.d, a.k + b.k);
  Matrix out(dim, dim);
  const Eigen::Index db = b.dim();
  for (Eigen::Index i = 0; i < a.dim(); ++i)
    for (Eigen::Index j = 0; j < a.dim(); ++j)
      out.block(i * db, j * db, db, db) = a.data(i, j) * b.data;
  return KOperator(a.k + b.k, a.d, std::move(out));
}

Vector tensor_product_vec(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Vector tensor_power_vec(const Vector& a, int k) {
  if (k < 1) throw std::invalid_argument("tensor_power_vec: k >= 1");
  Vector out = a;
  for (int i = 1; i < k; ++i) out = tensor_product_vec(out, a);
  return out;
}

void decompose_index(std::size_t flat, int d, int k, int* digits) {
  for (int i = k - 1; i >= 0; --i) {
    digits[i] = static_cast<int>(flat % d);
    flat /= d;
  }
}

std::size_t compose_index(const int* digits, int d, int k) {
  std::size_t flat = 0;
  for (int i = 0; i < k; ++i) flat = flat * d + static_cast<std::size_t>(digits[i]);
  return flat;
}

std::vector<Permutation> all_permutations(int k) {
  Permutation p(k);
  std::iota(p.begin(), p.end(), 0);
  std::vector<Permutation> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<std::vector<int>> ordered_tuples(int r, int n) {
  if (r < 0 || r > n) throw std::invalid_argument("ordered_tuples: need 0 <= r <= n");
  std::vector<std::vector<int>> out;
  std::vector<int> tuple;
  std::vector<char> used(n, 0);
  auto rec = [&](auto&& self, int depth) -> void {
    if (depth == r) {
      out.push_back(tuple);
      return;
    }
    for (int v = 0; v < n; ++v) {
      if (used[v]) continue;
      used[v] = 1;
      tuple.push_back(v);
      self(self, depth + 1);
      tuple.pop_back();
      used[v] = 0;
    }
  };
  rec(rec, 0);
  return out;
}

long long binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  long long out = 1;
  for (int i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

KOperator permutation_operator(int d, const Permutation& pi) {
  const int k = static_cast<int>(pi.size());
  const auto dim = checked_dim(d, k);
  Matrix out = Matrix::Zero(dim, dim);
  std::vector<int> digits(k), image(k);
  for (std::size_t row = 0; row < dim; ++row) {
    decompose_index(row, d, k, digits.data());
    for (int i = 0; i < k; ++i) image[i] = digits[pi[i]];
    out(row, compose_index(image.data(), d, k)) = 1.0;
  }
  return KOperator(k, d, std::move(out));
}

KOperator permute_conjugate(const KOperator& a, const Permutation& tau) {
  if (static_cast<int>(tau.size()) != a.k)
    throw std::invalid_argument("permute_conjugate: permutation length != particle count");
  const int k = a.k, d = a.d;
  const std::size_t dim = static_cast<std::size_t>(a.dim());
  // (P A P^{-1})(x, y) = A(tau(x), tau(y)) with tau acting digit-wise.
  std::vector<std::size_t> remap(dim);
  std::vector<int> digits(k), image(k);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    decompose_index(idx, d, k, digits.data());
    for (int i = 0; i < k; ++i) image[i] = digits[tau[i]];
    remap[idx] = compose_index(image.data(), d, k);
  }
  Matrix out(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) out(i, j) = a.data(remap[i], remap[j]);
  return KOperator(k, d, std::move(out));
}

Permutation compose_permutations(const Permutation& pi, const Permutation& sigma) {
  if (pi.size() != sigma.size()) throw std::invalid_argument("compose_permutations: size mismatch");
  Permutation out(pi.size());
  for (std::size_t i = 0; i < pi.size(); ++i) out[i] = pi[sigma[i]];
  return out;
}

Permutation inverse_permutation(const Permutation& pi) {
  Permutation out(pi.size());
  for (std::size_t i = 0; i < pi.size(); ++i) out[pi[i]] = static_cast<int>(i);
  return out;
}

static void check_slots(const std::vector<int>& slots, int i, int k_target) {
  if (static_cast<int>(slots.size()) != i)
    throw std::invalid_argument("extend: slot count != particle count of operator");
  std::vector<char> seen(k_target, 0);
  for (int s : slots) {
    if (s < 0 || s >= k_target) throw std::invalid_argument("extend: slot out of range");
    if (seen[s]) throw std::invalid_argument("extend: duplicate slot");
    seen[s] = 1;
  }
}

KOperator extend(const KOperator& a, const std::vector<int>& slots, int k_target) {
  const int i = a.k, d = a.d;
  check_slots(slots, i, k_target);
  const std::size_t dim = checked_dim(d, k_target);
  const std::size_t adim = static_cast<std::size_t>(a.dim());

  std::vector<int> rest;
  for (int s = 0; s < k_target; ++s)
    if (std::find(slots.begin(), slots.end(), s) == slots.end()) rest.push_back(s);
  const int nrest = static_cast<int>(rest.size());

  std::size_t rest_count = 1;
  for (int s = 0; s < nrest; ++s) rest_count *= static_cast<std::size_t>(d);

  Matrix out = Matrix::Zero(dim, dim);
  std::vector<int> arow(i), acol(i), rdig(std::max(nrest, 1)), full_row(k_target),
      full_col(k_target);
  for (std::size_t ar = 0; ar < adim; ++ar) {
    decompose_index(ar, d, i, arow.data());
    for (std::size_t ac = 0; ac < adim; ++ac) {
      const Complex v = a.data(ar, ac);
      if (v == Complex(0.0)) continue;
      decompose_index(ac, d, i, acol.data());
      for (std::size_t rr = 0; rr < rest_count; ++rr) {
        if (nrest > 0) decompose_index(rr, d, nrest, rdig.data());
        for (int s = 0; s < i; ++s) {
          full_row[slots[s]] = arow[s];
          full_col[slots[s]] = acol[s];
        }
        for (int s = 0; s < nrest; ++s) {
          full_row[rest[s]] = rdig[s];
          full_col[rest[s]] = rdig[s];
        }
        out(compose_index(full_row.data(), d, k_target),
            compose_index(full_col.data(), d, k_target)) = v;
      }
    }
  }
  return KOperator(k_target, d, std::move(out));
}

KOperator extend_via_permutation(const KOperator& a, const std::vector<int>& slots, int k_target,
                                 const Permutation& pi) {
  const int i = a.k;
  check_slots(slots, i, k_target);
  if (static_cast<int>(pi.size()) != k_target)
    throw std::invalid_argument("extend_via_permutation: permutation length != k_target");
  for (int j = 0; j < i; ++j)
    if (pi[slots[j]] != j)
      throw std::invalid_argument("extend_via_permutation: pi(slots[j]) != j");
  KOperator ordered = tensor_product(a, identity_op(a.d, k_target - i));
  if (i == k_target) ordered = a;
  // pi^{-1} o (A tensor Id) o pi, i.e. conjugation by P_{pi^{-1}}
  return permute_conjugate(ordered, inverse_permutation(pi));
}

KOperator sym_op(const KOperator& a) {
  if (a.k > 8) throw std::length_error("sym_op: factorial cost guard (k > 8)");
  KOperator acc = zero_op(a.d, a.k);
  const auto perms = all_permutations(a.k);
  for (const auto& pi : perms) acc += permute_conjugate(a, pi);
  acc *= Complex(1.0 / static_cast<double>(perms.size()));
  return acc;
}

Vector sym_vec(const Vector& f, int d, int k) {
  if (k > 8) throw std::length_error("sym_vec: factorial cost guard (k > 8)");
  const std::size_t dim = checked_dim(d, k);
  if (f.size() != static_cast<Eigen::Index>(dim))
    throw std::invalid_argument("sym_vec: vector length != d^k");
  Vector acc = Vector::Zero(f.size());
  std::vector<int> digits(k), image(k);
  const auto perms = all_permutations(k);
  for (const auto& pi : perms) {
    for (std::size_t idx = 0; idx < dim; ++idx) {
      decompose_index(idx, d, k, digits.data());
      for (int i = 0; i < k; ++i) image[i] = digits[pi[i]];
      acc(idx) += f(compose_index(image.data(), d, k));
    }
  }
  return acc / static_cast<double>(perms.size());
}

void CompensatedSum::add(double v) {
  const double t = sum + v;
  comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
  sum = t;
}

Complex trace_pair(const KOperator& a, const KOperator& gamma, const Weights& w) {
  if (a.k != gamma.k || a.d != gamma.d) throw std::invalid_argument("trace_pair: shape mismatch");
  // h^k sum_{x,y} A(x,y) gamma(y,x), without forming the product matrix.
  // Tiled so that the transposed access pattern stays cache-resident.
  constexpr Eigen::Index tile = 128;
  CompensatedSum re, im;
  const Eigen::Index n = a.dim();
  for (Eigen::Index yb = 0; yb < n; yb += tile)
    for (Eigen::Index xb = 0; xb < n; xb += tile) {
      const Eigen::Index ye = std::min(yb + tile, n), xe = std::min(xb + tile, n);
      for (Eigen::Index y = yb; y < ye; ++y)
        for (Eigen::Index x = xb; x < xe; ++x) {
          const Complex av = a.data(x, y);
          if (av.real() == 0.0 && av.imag() == 0.0) continue;  // multiplication operators
          const Complex v = av * gamma.data(y, x);
          re.add(v.real());
          im.add(v.imag());
        }
    }
  return w.particle(a.k) * Complex(re.value(), im.value());
}

Complex matrix_element(const Vector& u, const KOperator& a, const Vector& v, const Weights& w) {
  if (u.size() != a.dim() || v.size() != a.dim())
    throw std::invalid_argument("matrix_element: vector length != d^k");
  CompensatedSum re, im;
  const Eigen::Index n = a.dim();
  for (Eigen::Index y = 0; y < n; ++y) {
    const Complex vy = v(y);
    for (Eigen::Index x = 0; x < n; ++x) {
      const Complex ax = a.data(x, y);
      if (ax.real() == 0.0 && ax.imag() == 0.0) continue;
      const Complex t = std::conj(u(x)) * ax * vy;
      re.add(t.real());
      im.add(t.imag());
    }
  }
  return w.particle(a.k) * Complex(re.value(), im.value());
}

Complex inner(const Vector& f, const Vector& g, const Weights& w, int k) {
  if (f.size() != g.size()) throw std::invalid_argument("inner: length mismatch");
  return w.particle(k) * f.dot(g);  // Eigen dot conjugates the first argument
}

KOperator ket_bra(const Vector& f, const Vector& g, int d, int k) {
  const std::size_t dim = checked_dim(d, k);
  if (f.size() != static_cast<Eigen::Index>(dim) || g.size() != f.size())
    throw std::invalid_argument("ket_bra: vector length != d^k");
  Matrix out(dim, dim);
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(dim); ++j)
    out.col(j).noalias() = std::conj(g(j)) * f;
  return KOperator(k, d, std::move(out));
}

KOperator partial_trace(const KOperator& m, int keep, const Weights& w) {
  if (keep < 1 || keep > m.k) throw std::invalid_argument("partial_trace: need 1 <= keep <= k");
  if (keep == m.k) return m;
  const int d = m.d, k = m.k;
  const std::size_t dim_keep = checked_dim(d, keep);
  std::size_t dim_rest = 1;
  for (int i = 0; i < k - keep; ++i) dim_rest *= static_cast<std::size_t>(d);

  Matrix out = Matrix::Zero(dim_keep, dim_keep);
  // Leading particles are slowest-varying: flat = x_keep * dim_rest + z.
  for (std::size_t xr = 0; xr < dim_keep; ++xr)
    for (std::size_t xc = 0; xc < dim_keep; ++xc) {
      Complex acc = 0.0;
      for (std::size_t z = 0; z < dim_rest; ++z)
        acc += m.data(xr * dim_rest + z, xc * dim_rest + z);
      out(xr, xc) = acc;
    }
  out *= w.particle(k - keep);
  return KOperator(keep, d, std::move(out));
}

KOperator contract_r(const KOperator& a, const KOperator& b, int r, int k_target) {
  const int l = a.k, j = b.k;
  if (a.d != b.d) throw std::invalid_argument("contract_r: one-particle dimensions differ");
  if (r < 1 || r > std::min(l, j)) throw std::invalid_argument("contract_r: r out of range");
  if (k_target < std::max(l, l + j - r))
    throw std::invalid_argument("contract_r: k_target too small for slot placement");

  std::vector<int> a_slots(l);
  std::iota(a_slots.begin(), a_slots.end(), 0);
  const KOperator a_ext = extend(a, a_slots, k_target);

  KOperator b_sum = zero_op(b.d, k_target);
  for (const auto& alpha : ordered_tuples(r, l)) {
    std::vector<int> b_slots = alpha;
    for (int s = 0; s < j - r; ++s) b_slots.push_back(l + s);
    b_sum += extend(b, b_slots, k_target);
  }
  return a_ext * b_sum;
}

KOperator comm_r(const KOperator& a, const KOperator& b, int r, int k_target) {
  const int l = a.k, j = b.k;
  KOperator out = contract_r(a, b, r, k_target);
  out *= Complex(static_cast<double>(binomial(j, r)));
  KOperator rev = contract_r(b, a, r, k_target);
  rev *= Complex(static_cast<double>(binomial(l, r)));
  out -= rev;
  return out;
}

}  // namespace hierakit
