#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hierakit/functional_algebra.hpp"
#include "hierakit/random.hpp"

using namespace hierakit;

namespace {

const Weights unit{1.0};
using Ctx = PolynomialFunctional::Context;

DensityHierarchy zero_density(int d, int depth) {
  DensityHierarchy g;
  g.weights = unit;
  for (int k = 1; k <= depth; ++k) g.entries.emplace(k, zero_op(d, k));
  return g;
}

}  // namespace

TEST_CASE("evaluate") {
  Rng rng(201);
  const auto gamma = random_density_hierarchy(2, 2, rng, unit);
  SUBCASE("constants evaluate to themselves") {
    CHECK(evaluate(PolynomialFunctional::constant(3.25, Ctx::Infinite), gamma) == 3.25);
  }
  SUBCASE("trace functionals vanish at the origin") {
    const auto f = PolynomialFunctional::trace_functional(
        random_observable_hierarchy(2, 2, rng), Ctx::Infinite);
    CHECK(evaluate(f, zero_density(2, 2)) == 0.0);
  }
  SUBCASE("products evaluate pointwise") {
    const auto f = PolynomialFunctional::trace_functional(
        random_observable_hierarchy(2, 2, rng), Ctx::Infinite);
    const auto g = PolynomialFunctional::trace_functional(
        random_observable_hierarchy(2, 1, rng), Ctx::Infinite);
    CHECK(evaluate(f * g, gamma) ==
          doctest::Approx(evaluate(f, gamma) * evaluate(g, gamma)).epsilon(1e-14));
  }
  SUBCASE("evaluations are real") {
    const auto f = PolynomialFunctional::trace_functional(
        random_observable_hierarchy(2, 2, rng), Ctx::Infinite);
    CHECK(evaluate_imag_residual(f * f + 2.0 * f, gamma) < 1e-12);
  }
}

TEST_CASE("gateaux_derivative") {
  Rng rng(211);
  const auto gamma = random_density_hierarchy(2, 2, rng, unit);
  SUBCASE("trace functionals have constant derivative equal to the generator") {
    const auto gen = random_observable_hierarchy(2, 2, rng);
    const auto f = PolynomialFunctional::trace_functional(gen, Ctx::Infinite);
    const auto d0 = gateaux_derivative(f, zero_density(2, 2));
    const auto d1 = gateaux_derivative(f, gamma);
    for (int k = 1; k <= 2; ++k) {
      CHECK((d0.at(k) - gen.at(k)).max_norm() == 0.0);
      CHECK((d1.at(k) - gen.at(k)).max_norm() == 0.0);
    }
  }
  SUBCASE("chain rule for squares") {
    const auto g = PolynomialFunctional::trace_functional(
        random_observable_hierarchy(2, 2, rng), Ctx::Infinite);
    const auto d = gateaux_derivative(g * g, gamma);
    auto expect = gateaux_derivative(g, gamma);
    expect *= 2.0 * evaluate(g, gamma);
    ObservableHierarchy residual = d;
    residual += -1.0 * expect;
    CHECK(sup_max_norm(residual) < 1e-13);
  }
  SUBCASE("three-monomial functional matches central finite differences") {
    const auto f = PolynomialFunctional::constant(1.5, Ctx::Infinite) +
                   PolynomialFunctional::trace_functional(
                       random_observable_hierarchy(2, 2, rng), Ctx::Infinite) +
                   PolynomialFunctional::trace_functional(
                       random_observable_hierarchy(2, 1, rng), Ctx::Infinite) *
                       PolynomialFunctional::trace_functional(
                           random_observable_hierarchy(2, 2, rng), Ctx::Infinite);
    std::vector<DensityHierarchy> dirs;
    for (int i = 0; i < 10; ++i) dirs.push_back(random_density_hierarchy(2, 2, rng, unit));
    CHECK(gateaux_fd_error(f, gamma, dirs) < 1e-6);
  }
}

TEST_CASE("symbolic poisson bracket stays in the algebra") {
  Rng rng(221);
  const auto gamma = random_density_hierarchy(2, 3, rng, unit);
  const auto f = PolynomialFunctional::trace_functional(
                     random_observable_hierarchy(2, 2, rng), Ctx::Infinite) *
                 PolynomialFunctional::trace_functional(
                     random_observable_hierarchy(2, 1, rng), Ctx::Infinite);
  const auto g = PolynomialFunctional::trace_functional(
      random_observable_hierarchy(2, 2, rng), Ctx::Infinite);
  const auto pb = poisson_bracket_functional(f, g);
  CHECK(evaluate(pb, gamma) == doctest::Approx(poisson_bracket(f, g, gamma)).epsilon(1e-12));
  CHECK(evaluate(poisson_bracket_functional(g, f), gamma) ==
        doctest::Approx(-poisson_bracket(f, g, gamma)).epsilon(1e-12));
}

TEST_CASE("symplectic form") {
  GridSpec grid{12, 2.0 * M_PI};
  Rng rng(231);
  const auto f = random_wavefunction(grid, 1, rng);
  const auto g = random_wavefunction(grid, 1, rng);
  SUBCASE("alternating") { CHECK(std::abs(omega_l2(f, f)) < 1e-14); }
  SUBCASE("compatible with the complex structure: omega(f, i f) = 2 |f|^2") {
    // sign convention fixed by the duality identities: the inner product is
    // antilinear in its first argument, so the positive pairing carries the
    // i in the second slot
    CHECK(omega_l2(f, Complex(0, 1) * f) == doctest::Approx(2.0 * f.norm() * f.norm()));
    CHECK(omega_l2(Complex(0, 1) * f, f) == doctest::Approx(-2.0 * f.norm() * f.norm()));
  }
  SUBCASE("matches the index-sum oracle") {
    double expect = 0.0;
    for (int m = 0; m < grid.n; ++m)
      expect += 2.0 * grid.h() * (std::conj(f.values(m)) * g.values(m)).imag();
    CHECK(omega_l2(f, g) == doctest::Approx(expect).epsilon(1e-13));
    const SymplecticForm form{grid.weights(), 1};
    CHECK(form(f.values, g.values) == doctest::Approx(expect).epsilon(1e-13));
  }
  SUBCASE("nondegenerate under a basis sweep") {
    // omega(f, e_m) and omega(f, i e_m) together reconstruct f
    Vector recon(grid.n);
    for (int m = 0; m < grid.n; ++m) {
      Vector e = Vector::Zero(grid.n);
      e(m) = 1.0;
      const WaveFunction em{1, grid, e};
      const WaveFunction iem{1, grid, Complex(0, 1) * e};
      recon(m) = Complex(omega_l2(f, iem), -omega_l2(f, em)) / (2.0 * grid.h());
    }
    CHECK((recon - f.values).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("symplectic gradient through the factorized embedding") {
  GridSpec grid{8, 2.0 * M_PI};
  Rng rng(241);
  const auto phi = random_smooth_wavefunction(grid, rng);
  SUBCASE("one-particle generator applies as a matrix") {
    ObservableHierarchy gen;
    gen.entries.emplace(1, random_skew_bosonic(grid.n, 1, rng));
    const auto f = PolynomialFunctional::trace_functional(gen, Ctx::Infinite);
    const auto psi = symplectic_gradient_pullback(f, phi);
    CHECK((psi.values - gen.at(1).data * phi.values).cwiseAbs().maxCoeff() < 1e-13);
  }
  SUBCASE("constants have zero gradient") {
    const auto f = PolynomialFunctional::constant(2.0, Ctx::Infinite);
    CHECK(symplectic_gradient_pullback(f, phi).values.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("two-particle generator passes the finite-difference check on n = 16") {
    GridSpec grid16{16, 2.0 * M_PI};
    Rng rng16(242);
    const auto phi16 = random_smooth_wavefunction(grid16, rng16);
    ObservableHierarchy gen;
    gen.entries.emplace(2, random_skew_bosonic(grid16.n, 2, rng16));
    const auto f = PolynomialFunctional::trace_functional(gen, Ctx::Infinite);
    CHECK(gradient_report_pullback(f, phi16).max_rel_deviation < 1e-6);
  }
}

TEST_CASE("symplectic gradient through the density-matrix embedding") {
  GridSpec grid{4, 2.0 * M_PI};
  const int n = 2;
  Rng rng(251);
  const auto phi = random_bosonic_wavefunction(grid, n, rng);
  SUBCASE("identity-type generator scales the state") {
    ObservableHierarchy gen;
    KOperator id = identity_op(grid.n, n);
    id *= Complex(0, -1);
    gen.entries.emplace(n, std::move(id));
    const auto f = PolynomialFunctional::trace_functional(gen, Ctx::FiniteN, n);
    const auto g = symplectic_gradient_dm(f, phi);
    CHECK((g.values - Complex(0, -1) * phi.values).cwiseAbs().maxCoeff() < 1e-13);
  }
  SUBCASE("constants have zero gradient") {
    const auto f = PolynomialFunctional::constant(1.0, Ctx::FiniteN, n);
    CHECK(symplectic_gradient_dm(f, phi).values.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("product functional passes the finite-difference check") {
    const auto f = PolynomialFunctional::trace_functional(
                       random_observable_hierarchy(grid.n, 2, rng), Ctx::FiniteN, n) *
                   PolynomialFunctional::trace_functional(
                       random_observable_hierarchy(grid.n, 1, rng), Ctx::FiniteN, n);
    CHECK(gradient_report_dm(f, phi).max_rel_deviation < 1e-6);
  }
  SUBCASE("context mismatch is rejected") {
    const auto f = PolynomialFunctional::trace_functional(
        random_observable_hierarchy(grid.n, 1, rng), Ctx::Infinite);
    CHECK_THROWS_AS(symplectic_gradient_dm(f, phi), std::invalid_argument);
  }
}

TEST_CASE("fused pullback evaluation agrees with the materialized route") {
  GridSpec grid{10, 2.0 * M_PI};
  Rng rng(271);
  const auto phi = random_smooth_wavefunction(grid, rng);
  const auto f = PolynomialFunctional::trace_functional(
                     random_observable_hierarchy(grid.n, 2, rng), Ctx::Infinite) +
                 PolynomialFunctional::trace_functional(
                     random_observable_hierarchy(grid.n, 1, rng), Ctx::Infinite) *
                     PolynomialFunctional::trace_functional(
                         random_observable_hierarchy(grid.n, 2, rng), Ctx::Infinite);
  CHECK(evaluate_pullback(f, phi) ==
        doctest::Approx(evaluate(f, iota_fact(phi, 2))).epsilon(1e-12));
  // matrix elements match the rank-one trace pairing
  const auto a = random_skew_bosonic(grid.n, 2, rng);
  const Vector p2 = tensor_product_vec(phi.values, phi.values);
  const Complex lhs = matrix_element(p2, a, p2, grid.weights());
  const Complex rhs = trace_pair(a, ket_bra(p2, p2, grid.n, 2), grid.weights());
  CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("pb_l2 on precomputed gradients") {
  GridSpec grid{8, 2.0 * M_PI};
  Rng rng(261);
  const auto f = random_wavefunction(grid, 1, rng);
  const auto g = random_wavefunction(grid, 1, rng);
  CHECK(pb_l2(f, f) == doctest::Approx(0.0));
  CHECK(pb_l2(f, g) == doctest::Approx(-pb_l2(g, f)));
  CHECK(pb_l2_scaled(f, g, 3) == doctest::Approx(3.0 * pb_l2(f, g)));
}
