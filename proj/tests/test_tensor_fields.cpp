#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_helpers.hpp"
#include "xscat/tensor_fields.hpp"

using namespace xscat;
using namespace xscat::testing;

namespace {

SymTensorField rotation_form_2d() {
  // z_1 dz_2 - z_2 dz_1 on R^2
  SymTensorField mu(2, 1);
  mu.set_coefficient({0, 1}, Polynomial::variable(2, 0));
  mu.set_coefficient({1, 0}, -Polynomial::variable(2, 1));
  return mu;
}

}  // namespace

TEST_CASE("pair in multi-index components") {
  SymTensorField mu(3, 2);
  mu.set_coefficient({2, 0, 0}, Polynomial(3, CRat(1)));  // dz_1^2
  CHECK(pair_field(mu, {0.3, 0.4, 0.1}, {1, 0, 0}).real() == doctest::Approx(1.0));

  SymTensorField nu(3, 2);
  nu.set_coefficient({1, 1, 0}, Polynomial(3, CRat(1)));  // dz_1 dz_2
  CHECK(std::abs(pair_field(nu, {0.3, 0.4, 0.1}, {1, 0, 0})) == doctest::Approx(0.0));

  Polynomial f = Polynomial::variable(3, 2);
  SymTensorField scalar = SymTensorField::scalar(f);
  CHECK(pair_field(scalar, {0.2, -0.1, 0.7}, {5, 5, 5}).real() == doctest::Approx(0.7));
}

TEST_CASE("pair is multilinear of degree l in the direction") {
  SplitMix64 rng(11);
  for (int l = 0; l <= 3; ++l) {
    SymTensorField mu = random_field(3, l, 2, rng);
    auto z = random_unit(3, rng);
    auto w = random_unit(3, rng);
    double c = 1.0 + rng.uniform01();
    std::vector<double> cw = w;
    for (double& x : cw) x *= c;
    auto lhs = pair_field(mu, z, cw);
    auto rhs = pair_field(mu, z, w) * std::pow(c, l);
    CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("radial contraction") {
  SUBCASE("rotation form is aradial, symbolically zero") {
    CHECK(radial_contraction(rotation_form_2d()).is_zero());
    CHECK(is_aradial(rotation_form_2d(), 1e-12));
  }
  SUBCASE("constant 1-form is not aradial") {
    SymTensorField mu(3, 1);
    mu.set_coefficient({1, 0, 0}, Polynomial(3, CRat(1)));  // dz_1
    SymTensorField c = radial_contraction(mu);
    CHECK(pair_field(c, {1, 0, 0}, {0, 0, 0}).real() == doctest::Approx(1.0));
    CHECK_FALSE(is_aradial(mu, 1e-10));
  }
  SUBCASE("zero field") {
    SymTensorField mu(3, 2);
    CHECK(radial_contraction(mu).is_zero());
    CHECK(is_aradial(mu, 1e-12));
  }
  SUBCASE("order error") {
    SymTensorField scalar = SymTensorField::scalar(Polynomial(3, CRat(1)));
    CHECK_THROWS_AS(radial_contraction(scalar), ValidationError);
    CHECK(is_aradial(scalar, 0.0));  // l = 0 is aradial by definition
  }
}

TEST_CASE("symmetrized derivative") {
  SUBCASE("gradient of a scalar") {
    Polynomial phi = Polynomial::variable(3, 0) * Polynomial::variable(3, 1);  // z1 z2
    SymTensorField grad = sym_derivative(SymTensorField::scalar(phi));
    CHECK(grad.coefficient({1, 0, 0}) == Polynomial::variable(3, 1));
    CHECK(grad.coefficient({0, 1, 0}) == Polynomial::variable(3, 0));
    CHECK(grad.coefficient({0, 0, 1}).is_zero());
  }
  SUBCASE("displayed tuple-component formula, n=2, eta = phi dz_1") {
    Polynomial phi(2);
    phi.add_term({2, 1}, CRat(1));  // phi = z1^2 z2
    SymTensorField eta(2, 1);
    eta.set_coefficient({1, 0}, phi);
    SymTensorField psi = sym_derivative(eta);
    CHECK(psi.tuple_component({0, 0}) == phi.derivative(0));
    CHECK(psi.tuple_component({0, 1}) == phi.derivative(1).scaled(CRat(1, 2)));
    CHECK(psi.tuple_component({1, 0}) == phi.derivative(1).scaled(CRat(1, 2)));
    CHECK(psi.tuple_component({1, 1}).is_zero());
  }
  SUBCASE("zero maps to zero") {
    CHECK(sym_derivative(SymTensorField(3, 1)).is_zero());
  }
}

TEST_CASE("multi-index vs index-tuple bookkeeping round trip") {
  SplitMix64 rng(23);
  for (int l = 1; l <= 3; ++l) {
    SymTensorField mu = random_field(3, l, 2, rng);
    std::map<MultiIndex, Polynomial> tuple_comps;
    for (const auto& alpha : enumerate_multiindices(3, l)) {
      // any tuple sorting to alpha gives the same component
      std::vector<int> tuple;
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < alpha[i]; ++k) tuple.push_back(i);
      tuple_comps[alpha] = mu.tuple_component(tuple);
    }
    CHECK(SymTensorField::from_tuple_components(3, l, tuple_comps) == mu);
  }
}

TEST_CASE("exchange residual") {
  SUBCASE("l=1 reduces to mixed partials") {
    Polynomial phi(2);
    phi.add_term({2, 2}, CRat(3));
    phi.add_term({1, 0}, CRat(-2));
    SymTensorField mu = sym_derivative(SymTensorField::scalar(phi));
    CHECK(exchange_residual(mu, {0}, {1}).is_zero());
  }
  SUBCASE("l=2 potential tensor, every tuple pair") {
    Polynomial p(2);
    p.add_term({2, 0}, CRat(1));  // z1^2
    SymTensorField eta(2, 1);
    eta.set_coefficient({0, 1}, p);  // z1^2 dz_2
    SymTensorField mu = sym_derivative(eta);
    for (int a1 = 0; a1 < 2; ++a1)
      for (int a2 = 0; a2 < 2; ++a2)
        for (int b1 = 0; b1 < 2; ++b1)
          for (int b2 = 0; b2 < 2; ++b2)
            CHECK(exchange_residual(mu, {a1, a2}, {b1, b2}).is_zero());
  }
  SUBCASE("l=2 constant tensor") {
    SymTensorField mu(3, 2);
    mu.set_coefficient({2, 0, 0}, Polynomial(3, CRat(1)));  // dz_1^2
    CHECK(exchange_residual(mu, {0, 0}, {1, 1}).is_zero());
  }
  SUBCASE("tuple length mismatch") {
    SymTensorField mu(3, 2);
    CHECK_THROWS_AS(exchange_residual(mu, {0}, {1}), ValidationError);
  }
}

TEST_CASE("sym_derivative followed by exchange_residual vanishes identically") {
  SplitMix64 rng(31);
  int checked = 0;
  for (int n = 2; n <= 4; ++n)
    for (int l = 1; l <= 3; ++l) {
      if (n == 4 && l == 3) continue;  // covered below with fewer draws
      for (int rep = 0; rep < 5; ++rep) {
        SymTensorField eta = random_field(n, l - 1, 3, rng);
        SymTensorField mu = sym_derivative(eta);
        auto tuples = enumerate_multiindices(n, 1);
        // all index tuples alpha, beta in {0..n-1}^l
        std::vector<std::vector<int>> all;
        std::vector<int> cur(l, 0);
        while (true) {
          all.push_back(cur);
          int i = l - 1;
          while (i >= 0 && cur[i] == n - 1) cur[i--] = 0;
          if (i < 0) break;
          ++cur[i];
        }
        for (const auto& a : all)
          for (const auto& b : all) {
            CHECK(exchange_residual(mu, a, b).is_zero());
            ++checked;
          }
      }
    }
  SplitMix64 rng2(32);
  for (int rep = 0; rep < 2; ++rep) {
    SymTensorField eta = random_field(4, 2, 3, rng2);
    SymTensorField mu = sym_derivative(eta);
    CHECK(exchange_residual(mu, {0, 1, 2}, {3, 0, 1}).is_zero());
    CHECK(exchange_residual(mu, {1, 1, 3}, {2, 0, 2}).is_zero());
  }
  CHECK(checked > 1000);
}

TEST_CASE("multiply_poly") {
  SplitMix64 rng(41);
  SymTensorField mu = random_field(3, 1, 1, rng);
  CHECK(multiply_poly(Polynomial(3, CRat(1)), mu) == mu);
  CHECK(multiply_poly(Polynomial(3), mu).is_zero());
  MultiIndex zn_l{0, 0, 1};
  SymTensorField nu(3, 1);
  nu.set_coefficient({1, 0, 0}, Polynomial(3, CRat(1)));
  SymTensorField prod = multiply_poly(Polynomial::monomial(3, zn_l, CRat(1)), nu);
  CHECK(prod.coefficient({1, 0, 0}) == Polynomial::monomial(3, zn_l, CRat(1)));
}

TEST_CASE("parity classification") {
  SymTensorField odd_scalar = SymTensorField::scalar(Polynomial::variable(3, 0));
  CHECK(parity(odd_scalar) == Parity::odd);

  SymTensorField const_oneform(3, 1);
  const_oneform.set_coefficient({1, 0, 0}, Polynomial(3, CRat(2)));
  CHECK(parity(const_oneform) == Parity::odd);  // deg 0 + l 1

  SymTensorField linear_oneform(3, 1);
  linear_oneform.set_coefficient({1, 0, 0}, Polynomial::variable(3, 1));
  CHECK(parity(linear_oneform) == Parity::even);

  SymTensorField mixed = const_oneform;  // odd component (deg 0 + l 1)
  mixed.add_coefficient({0, 1, 0}, Polynomial::variable(3, 0));  // even (deg 1 + l 1)
  CHECK(parity(mixed) == Parity::mixed);
}

TEST_CASE("aradial basis") {
  SUBCASE("l=0, d_max=0 is the constant") {
    auto basis = aradial_basis(3, 0, 0);
    REQUIRE(basis.size() == 1);
    CHECK(basis[0].coefficient({0, 0, 0}) == Polynomial(3, CRat(1)));
  }
  SUBCASE("l=1, n=3, linear coefficients: the rotation forms") {
    auto basis = aradial_basis(3, 1, 1);
    CHECK(basis.size() == 3);  // d=0 contributes nothing, d=1 the three rotations
    for (const auto& f : basis) {
      CHECK(is_aradial(f, 1e-10));
      CHECK(radial_contraction(f).is_zero());  // exact, not just sampled
      CHECK(f.has_homogeneous_coefficients());
    }
    CHECK(svd_rank(evaluation_matrix(basis, 40, 7)) == 3);
  }
  SUBCASE("all returned elements pass is_aradial and independence, l=2") {
    auto basis = aradial_basis(3, 2, 2);
    REQUIRE(!basis.empty());
    for (const auto& f : basis) {
      CHECK(is_aradial(f, 1e-10));
      CHECK(radial_contraction(f).is_zero());
    }
    CHECK(svd_rank(evaluation_matrix(basis, 4 * static_cast<int>(basis.size()), 17)) ==
          static_cast<int>(basis.size()));
  }
}

TEST_CASE("rational_from_double is exact on dyadics") {
  CHECK(rational_from_double(0.375) == Rational(3, 8));
  CHECK(rational_from_double(-2.5) == Rational(-5, 2));
  CHECK(rational_from_double(0.0) == Rational(0));
}
