#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "test_helpers.hpp"
#include "xscat/xray_transform.hpp"

using namespace xscat;
using namespace xscat::testing;

namespace {
constexpr double kPi = std::numbers::pi;

GreatCircleArc polar_arc(int n) {
  // omega = e_n, v = e_1: gamma(s) hits cos(s) in the last coordinate.
  return GreatCircleArc::checked(SpherePoint::axis(n, n - 1), SpherePoint::axis(n, 0));
}

SymTensorField zn_scalar(int n) { return SymTensorField::scalar(Polynomial::variable(n, n - 1)); }

/// Random aradial field: small dyadic combination of aradial basis elements.
SymTensorField random_aradial(int n, int l, int d_max, SplitMix64& rng) {
  auto basis = aradial_basis(n, l, d_max);
  SymTensorField acc(n, l);
  for (const auto& b : basis) {
    long c = static_cast<long>(rng.next() % 17) - 8;
    if (c != 0) acc += b.scaled(CRat(Rational(c, 8)));
  }
  return acc;
}
}  // namespace

TEST_CASE("weighted_xray basics") {
  const auto& rule = QuadratureRule::production();
  auto arc = polar_arc(3);

  CHECK(std::abs(weighted_xray(SymTensorField(3, 2), arc, 0, rule)) == 0.0);

  SymTensorField c = SymTensorField::scalar(Polynomial(3, CRat(5, 2)));
  CHECK(weighted_xray(c, arc, 0, rule).real() == doctest::Approx(2.5 * kPi).epsilon(1e-13));

  // mu = z_n along the polar arc: integrand cos(s), integral 0
  CHECK(std::abs(weighted_xray(zn_scalar(3), arc, 0, rule)) < 1e-14);
}

TEST_CASE("weighted_xray is linear") {
  const auto& rule = QuadratureRule::production();
  SplitMix64 rng(77);
  auto arcs = sample_arcs(3, 3, 7001);
  for (const auto& arc : arcs) {
    SymTensorField m1 = random_field(3, 2, 2, rng);
    SymTensorField m2 = random_field(3, 2, 2, rng);
    CRat a(3, 4), b(-5, 8);
    auto lhs = weighted_xray(m1.scaled(a) + m2.scaled(b), arc, 1, rule);
    auto rhs = 0.75 * weighted_xray(m1, arc, 1, rule) - 0.625 * weighted_xray(m2, arc, 1, rule);
    CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("antipodal reversal: arc (-omega, v) picks up (-1)^l") {
  const auto& rule = QuadratureRule::production();
  SplitMix64 rng(78);
  for (int l = 0; l <= 2; ++l) {
    SymTensorField mu = random_field(3, l, 2, rng);
    for (const auto& arc : sample_arcs(4, 3, 911)) {
      std::vector<double> neg = arc.omega.coords;
      for (double& x : neg) x = -x;
      GreatCircleArc rev{SpherePoint{neg}, arc.v};
      auto a = weighted_xray(mu, rev, 2, rule);
      auto b = weighted_xray(mu, arc, 2, rule);
      if (l % 2) b = -b;
      CHECK(std::abs(a - b) < 1e-10 * (1.0 + std::abs(b)));
    }
  }
}

TEST_CASE("shifted_xray") {
  const auto& rule = QuadratureRule::production();
  auto arc = polar_arc(3);
  SymTensorField mu = zn_scalar(3);  // F(t) = cos t on this arc

  SUBCASE("alpha = 0 reduces to weighted_xray") {
    auto a = shifted_xray(mu, arc, 2, 0.0, rule);
    auto b = weighted_xray(mu, arc, 2, rule);
    CHECK(std::abs(a - b) < 1e-14);
  }
  SUBCASE("I_2(alpha) = -(4/3) sin(alpha), from the symbolic oracle") {
    TrigPolyPi oracle = shifted_weighted_integral(trig_cos(), 2);
    for (double alpha : {0.0, 0.3, 1.1, 2.5, -0.7}) {
      auto lib = shifted_xray(mu, arc, 2, alpha, rule);
      CHECK(std::abs(lib - oracle.eval(alpha)) < 1e-13);
      CHECK(std::abs(lib - std::complex<double>{-4.0 / 3.0 * std::sin(alpha), 0.0}) < 1e-13);
    }
  }
  SUBCASE("periodicity in the shift") {
    auto a = shifted_xray(mu, arc, 3, 2 * kPi, rule);
    auto b = shifted_xray(mu, arc, 3, 0.0, rule);
    CHECK(std::abs(a - b) < 1e-12);
  }
}

TEST_CASE("shift ODE identity") {
  const auto& rule = QuadratureRule::production();
  auto arc = polar_arc(3);

  SUBCASE("exact case F = cos, j = 2: both sides are -4 sin(alpha)") {
    for (double alpha : {0.2, 0.9, 1.7}) {
      auto chk = shift_ode_check(zn_scalar(3), arc, 2, alpha, rule);
      CHECK(std::abs(chk.rhs - std::complex<double>{-4.0 * std::sin(alpha), 0.0}) < 1e-12);
      CHECK(chk.defect < 1e-7);
    }
  }
  SUBCASE("zero field has zero defect") {
    auto chk = shift_ode_check(SymTensorField(3, 1), arc, 2, 0.5, rule);
    CHECK(chk.defect == 0.0);
  }
  SUBCASE("random scalar field, j = 3") {
    SplitMix64 rng(91);
    SymTensorField mu = SymTensorField::scalar(random_polynomial(3, 3, rng));
    auto chk = shift_ode_check(mu, arc, 3, 0.3, rule);
    CHECK(chk.defect < 1e-6);
  }
  SUBCASE("randomized suite across orders and arcs") {
    SplitMix64 rng(92);
    for (const auto& arc2 : sample_arcs(3, 3, 555))
      for (int l = 0; l <= 2; ++l) {
        SymTensorField mu = random_field(3, l, 3, rng);
        for (int j : {2, 3, 4}) {
          auto chk = shift_ode_check(mu, arc2, j, 0.4, rule);
          CHECK(chk.defect < 1e-6 * (1.0 + std::abs(chk.rhs)));
        }
      }
  }
}

TEST_CASE("component form re-expression") {
  const auto& rule = QuadratureRule::production();

  SUBCASE("l = 0: the two forms coincide by definition") {
    SymTensorField f = SymTensorField::scalar(Polynomial::variable(3, 0));
    for (const auto& arc : sample_arcs(3, 3, 31)) {
      auto a = component_form_value(f, arc, 2, rule);
      auto b = weighted_xray(f, arc, 1, rule);
      CHECK(std::abs(a - b) < 1e-13);
    }
  }

  SUBCASE("n=2 plane check with the intermediate aradiality identity") {
    // omega = e_2, v = e_1: gamma(s) = (sin s, cos s)
    auto arc = GreatCircleArc::checked(SpherePoint::axis(2, 1), SpherePoint::axis(2, 0));
    SymTensorField mu(2, 1);  // z_1 dz_2 - z_2 dz_1
    mu.set_coefficient({0, 1}, Polynomial::variable(2, 0));
    mu.set_coefficient({1, 0}, -Polynomial::variable(2, 1));
    for (double s : {0.4, 1.0, 2.2}) {
      auto z = gamma(arc, s);
      // a_{(0,1)} along gamma is sin s; a_{(1,0)} = (-cos s / sin s) a_{(0,1)}
      CHECK(mu.coefficient({0, 1}).eval(z).real() == doctest::Approx(std::sin(s)));
      CHECK(mu.coefficient({1, 0}).eval(z).real() ==
            doctest::Approx(-std::cos(s) / std::sin(s) * std::sin(s)));
    }
    for (int r : {1, 2}) {
      auto comp = component_form_value(mu, arc, r, rule);
      auto wx = weighted_xray(mu, arc, 1 + r - 1, rule);
      CHECK(std::abs(comp - (-1.0) * wx) < 1e-10);
    }
  }

  SUBCASE("zero field") {
    auto arc = polar_arc(3);
    CHECK(std::abs(component_form_value(SymTensorField(3, 1), arc, 1, rule)) == 0.0);
  }

  SUBCASE("non-aradial input is rejected") {
    SymTensorField mu(3, 1);
    mu.set_coefficient({1, 0, 0}, Polynomial(3, CRat(1)));
    CHECK_THROWS_AS(component_form_value(mu, polar_arc(3), 1, rule), ValidationError);
  }

  SUBCASE("identity over random aradial fields (invariant)") {
    SplitMix64 rng(2025);
    auto arcs = sample_arcs(6, 3, 606);
    for (int l = 1; l <= 3; ++l) {
      SymTensorField mu = random_aradial(3, l, 2, rng);
      REQUIRE(is_aradial(mu, 1e-10));
      double sgn = (l % 2 == 0) ? 1.0 : -1.0;
      for (const auto& arc : arcs)
        for (int r : {1, 2}) {
          auto comp = component_form_value(mu, arc, r, rule);
          auto wx = weighted_xray(mu, arc, l + r - 1, rule);
          CHECK(std::abs(comp - sgn * wx) < 1e-8);
        }
    }
  }
}

TEST_CASE("fundamental-theorem kernel check") {
  const auto& rule = QuadratureRule::production();

  SUBCASE("zero eta") {
    auto chk = ftc_kernel_check(SymTensorField(3, 0), polar_arc(3), rule);
    CHECK(std::abs(chk.integral) == 0.0);
    CHECK(std::abs(chk.boundary_difference) == 0.0);
    CHECK(chk.defect == 0.0);
  }

  SUBCASE("scalar eta: exact chain rule") {
    SplitMix64 rng(41);
    SymTensorField eta = SymTensorField::scalar(random_polynomial(3, 3, rng));
    for (const auto& arc : sample_arcs(5, 3, 505)) {
      auto chk = ftc_kernel_check(eta, arc, rule);
      CHECK(chk.defect < 1e-10);
    }
  }

  SUBCASE("even scalar eta: boundary terms cancel, integral vanishes") {
    Polynomial p(3);
    p.add_term({2, 0, 0}, CRat(1));
    p.add_term({0, 1, 1}, CRat(-3));
    SymTensorField eta = SymTensorField::scalar(p);
    for (const auto& arc : sample_arcs(5, 3, 707)) {
      auto chk = ftc_kernel_check(eta, arc, rule);
      CHECK(std::abs(chk.integral) < 1e-12);
      CHECK(std::abs(chk.boundary_difference) < 1e-12);
    }
  }

  SUBCASE("aradial eta of higher order: exact along great circles") {
    // eta = |z|^2 (z_1 dz_2 - z_2 dz_1) is aradial with nonzero sym_derivative.
    SymTensorField eta(3, 1);
    Polynomial z2(3);
    z2.add_term({2, 0, 0}, CRat(1));
    z2.add_term({0, 2, 0}, CRat(1));
    z2.add_term({0, 0, 2}, CRat(1));
    eta.set_coefficient({0, 1, 0}, z2 * Polynomial::variable(3, 0));
    eta.set_coefficient({1, 0, 0}, -(z2 * Polynomial::variable(3, 1)));
    REQUIRE(is_aradial(eta, 1e-12));
    REQUIRE(!sym_derivative(eta).is_zero());
    for (const auto& arc : sample_arcs(5, 3, 808)) {
      auto chk = ftc_kernel_check(eta, arc, rule);
      CHECK(chk.defect < 1e-10);
      // parity-canceling boundary: deg 3 + order 1 even => zero transform
      CHECK(std::abs(chk.integral) < 1e-10);
    }
  }
}

TEST_CASE("potential tensors p mu with parity-canceling boundaries are unseen at weight 0") {
  // The kernel reduction: multiply an aradial field by a homogeneous
  // polynomial (the product stays aradial), take the symmetrized derivative,
  // and require the weight-0 transform to vanish when the boundary terms
  // cancel by parity.
  const auto& rule = QuadratureRule::production();
  SplitMix64 rng(515);
  auto arcs = sample_arcs(8, 3, 909);
  for (int eta_order = 0; eta_order <= 2; ++eta_order) {
    SymTensorField mu = (eta_order == 0)
                            ? SymTensorField::scalar(Polynomial(3, CRat(1)))
                            : random_aradial(3, eta_order, 1, rng);
    if (mu.is_zero()) continue;
    // homogeneous p chosen so that deg(p mu) + order is even
    int mu_deg = mu.coefficient_degree();
    int p_deg = (mu_deg + eta_order) % 2 == 0 ? 2 : 1;
    Polynomial p = random_polynomial(3, p_deg, rng, /*homogeneous=*/true);
    if (p.is_zero()) p = Polynomial::variable(3, 0);
    SymTensorField eta = multiply_poly(p, mu);
    REQUIRE(is_aradial(eta, 1e-10));
    SymTensorField pot = sym_derivative(eta);
    if (pot.is_zero()) continue;
    for (const auto& arc : arcs) {
      auto chk = ftc_kernel_check(eta, arc, rule);
      CHECK(std::abs(chk.boundary_difference) < 1e-10);
      CHECK(std::abs(chk.integral) < 1e-9);
      CHECK(std::abs(weighted_xray(pot, arc, 0, rule)) < 1e-9);
    }
  }
}

TEST_CASE("forward matrix") {
  const auto& rule = QuadratureRule::production();
  auto arcs = sample_arcs(4, 3, 1234);

  SUBCASE("zero field gives a zero column") {
    std::vector<SymTensorField> basis{SymTensorField(3, 1), aradial_basis(3, 1, 1)[0]};
    auto m = forward_matrix(basis, arcs, 1, rule);
    CHECK(m.col(0).norm() == 0.0);
    CHECK(m.col(1).norm() > 0.0);
  }

  SUBCASE("1x1 constant scalar at j = 0 is pi") {
    std::vector<SymTensorField> basis{SymTensorField::scalar(Polynomial(3, CRat(1)))};
    std::vector<GreatCircleArc> one_arc{arcs[0]};
    auto m = forward_matrix(basis, one_arc, 0, rule);
    CHECK(m(0, 0) == doctest::Approx(kPi).epsilon(1e-13));
  }

  SUBCASE("entries match individually computed transforms") {
    auto basis = aradial_basis(3, 1, 2);
    auto m = forward_matrix(basis, arcs, 1, rule);
    for (int i = 0; i < m.rows(); ++i)
      for (int c = 0; c < m.cols(); ++c)
        CHECK(m(i, c) ==
              doctest::Approx(weighted_xray(basis[c], arcs[i], 1, rule).real()).epsilon(1e-14));
  }

  SUBCASE("mixed orders are rejected") {
    std::vector<SymTensorField> bad{aradial_basis(3, 1, 1)[0],
                                    SymTensorField::scalar(Polynomial(3, CRat(1)))};
    CHECK_THROWS_AS(forward_matrix(bad, arcs, 0, rule), ValidationError);
  }
}
