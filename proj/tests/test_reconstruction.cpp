#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "xscat/reconstruction.hpp"

using namespace xscat;
using namespace xscat::testing;

namespace {

/// Max relative coefficient error across degrees of one recovered level.
double level_error(const LevelRecovery& rec, const LevelTruth& truth) {
  double worst = 0.0;
  for (const auto& deg : rec.degrees) {
    const auto& expect = truth.basis_coords.at(deg.degree);
    if (deg.unconstrained) continue;
    double num = 0.0, den = 0.0;
    for (size_t m = 0; m < expect.size(); ++m) {
      num += std::norm(deg.coefficients[m] - std::complex<double>{expect[m], 0.0});
      den += expect[m] * expect[m];
    }
    worst = std::max(worst, std::sqrt(num) / std::max(std::sqrt(den), 1e-30));
  }
  return worst;
}

int max_basis_size(int n, int l, int d_max, const std::vector<int>& levels) {
  int mx = 1;
  for (int r : levels)
    for (int d = 0; d <= l; ++d)
      mx = std::max(mx, static_cast<int>(admissible_basis(n, d, d_max, r).size()));
  return mx;
}

}  // namespace

TEST_CASE("admissible basis restricts to the weight-matched parity class") {
  for (int r : {1, 2, 3})
    for (int d : {0, 1, 2})
      for (const auto& f : admissible_basis(3, d, 3, r)) {
        CHECK(is_aradial(f, 1e-10));
        CHECK((f.coefficient_degree() - (r - 1)) % 2 == 0);
      }
  // complementary parity classes really are excluded
  CHECK(admissible_basis(3, 1, 3, 1).size() + admissible_basis(3, 1, 3, 2).size() ==
        aradial_basis(3, 1, 3).size());
}

TEST_CASE("synthesize") {
  SUBCASE("deterministic per seed and independent of k") {
    auto a = synthesize(42, 3, 2, 2, {1, 2}, 2);
    auto b = synthesize(42, 3, 2, 2, {1, 2}, 2);
    auto c = synthesize(42, 3, 3, 2, {1, 2}, 2);
    for (int r : {1, 2}) {
      CHECK(a.levels.at(r).coeffs == b.levels.at(r).coeffs);
      CHECK(a.levels.at(r).coeffs == c.levels.at(r).coeffs);
      CHECK(a.levels.at(r).basis_coords == c.levels.at(r).basis_coords);
    }
  }
  SUBCASE("l = 0 draws scalar levels only") {
    auto t = synthesize(7, 3, 1, 0, {1}, 2);
    for (const auto& [alpha, p] : t.levels.at(1).coeffs) CHECK(mi_order(alpha) == 0);
  }
  SUBCASE("every level is aradial and parity-consistent") {
    auto t = synthesize(11, 3, 2, 2, {1, 2, 3}, 2);
    for (const auto& [r, level] : t.levels) {
      for (int d = 0; d <= 2; ++d) {
        SymTensorField field(3, d);
        for (const auto& [alpha, p] : level.coeffs)
          if (mi_order(alpha) == d) field.set_coefficient(alpha, p);
        CHECK(is_aradial(field, 1e-10));
        if (!field.is_zero())
          CHECK((field.coefficient_degree() - (r - 1)) % 2 == 0);
      }
    }
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(synthesize(1, 2, 1, 0, {1}, 1), ValidationError);   // n < 3
    CHECK_THROWS_AS(synthesize(1, 3, 1, 2, {1}, 1), ValidationError);   // l > 2k-1
    CHECK_THROWS_AS(synthesize(1, 3, 1, 1, {1, 1}, 1), ValidationError);  // dup levels
  }
  SUBCASE("empty admissible basis is reported, not silently accepted") {
    // l = 0 at level 2 with d_max = 0: only odd coefficient degrees are
    // admissible, so nothing can be drawn
    CHECK_THROWS_AS(synthesize(1, 3, 1, 0, {2}, 0), ValidationError);
  }
}

TEST_CASE("forward data") {
  const auto& rule = QuadratureRule::gauss_legendre(64);
  auto arcs = sample_arcs(6, 3, 2024);
  auto grid = EnergyGrid::default_grid(2);

  SUBCASE("zero truth gives zero data") {
    PerturbationAsymptotics zero;
    zero.n = 3;
    zero.k = 1;
    zero.l = 1;
    zero.d_max = 1;
    zero.levels[1] = LevelTruth{};
    auto data = forward_data(zero, arcs, grid, rule);
    for (const auto& per_energy : data.values)
      for (const auto& per_arc : per_energy)
        for (auto v : per_arc) CHECK(std::abs(v) == 0.0);
  }

  SUBCASE("single-level truth produces data only at that level") {
    auto t = synthesize(5, 3, 1, 1, {2}, 1);
    auto data = forward_data(t, arcs, grid, rule);
    REQUIRE(data.levels == std::vector<int>{2});
    double norm = 0.0;
    for (auto v : data.values[0][0]) norm += std::abs(v);
    CHECK(norm > 0.0);
  }

  SUBCASE("linearity in the truth coefficients") {
    auto t = synthesize(9, 3, 1, 1, {1}, 1);
    PerturbationAsymptotics doubled = t;
    for (auto& [r, level] : doubled.levels)
      for (auto& [alpha, p] : level.coeffs) p = p.scaled(CRat(2));
    auto d1 = forward_data(t, arcs, grid, rule);
    auto d2 = forward_data(doubled, arcs, grid, rule);
    for (size_t e = 0; e < d1.values[0].size(); ++e)
      for (size_t a = 0; a < d1.values[0][e].size(); ++a)
        CHECK(std::abs(d2.values[0][e][a] - 2.0 * d1.values[0][e][a]) <
              1e-12 * (1.0 + std::abs(d1.values[0][e][a])));
  }

  SUBCASE("thread count does not change values") {
    auto t = synthesize(13, 3, 2, 1, {1, 2}, 2);
    auto a = forward_data(t, arcs, grid, rule, 1);
    auto b = forward_data(t, arcs, grid, rule, 4);
    for (size_t li = 0; li < a.values.size(); ++li)
      for (size_t e = 0; e < a.values[li].size(); ++e)
        for (size_t ai = 0; ai < a.values[li][e].size(); ++ai)
          CHECK(a.values[li][e][ai] == b.values[li][e][ai]);
  }

  SUBCASE("grid smaller than l+1 is rejected") {
    auto t = synthesize(5, 3, 2, 2, {1}, 2);
    CHECK_THROWS_AS(forward_data(t, arcs, EnergyGrid::default_grid(2), rule),
                    UnderdeterminedError);
  }
}

TEST_CASE("noiseless round trip recovers the coefficients") {
  const auto& rule = QuadratureRule::production();
  const int n = 3, k = 2, l = 2, d_max = 2;
  const std::vector<int> levels{1, 2, 3};
  auto truth = synthesize(31337, n, k, l, levels, d_max);
  auto arcs = sample_arcs(3 * max_basis_size(n, l, d_max, levels), n, 99);
  auto grid = EnergyGrid::default_grid(energies_required(l));
  auto data = forward_data(truth, arcs, grid, rule, 4);

  PipelineShape shape{n, k, l, d_max};
  auto report = recover_all(data, arcs, shape, rule);
  REQUIRE(!report.any_failed);
  REQUIRE(report.levels.size() == levels.size());
  for (const auto& rec : report.levels) {
    CHECK(level_error(rec, truth.levels.at(rec.r)) < 1e-6);
    for (const auto& deg : rec.degrees) {
      if (deg.unconstrained) continue;
      CHECK(deg.residual < 1e-8);
      CHECK(deg.condition_number < 1e3);
    }
  }

  SUBCASE("single level recovery equals the recover_all entry") {
    auto one = recover_level(data, 0, arcs, shape, rule);
    CHECK(one.r == report.levels[0].r);
    for (size_t d = 0; d < one.degrees.size(); ++d)
      for (size_t m = 0; m < one.degrees[d].coefficients.size(); ++m)
        CHECK(one.degrees[d].coefficients[m] == report.levels[0].degrees[d].coefficients[m]);
  }

  SUBCASE("zero data recovers zero with zero residual") {
    SymbolDataSet zero = data;
    for (auto& per_energy : zero.values)
      for (auto& per_arc : per_energy)
        for (auto& v : per_arc) v = 0.0;
    auto rec = recover_level(zero, 0, arcs, shape, rule);
    for (const auto& deg : rec.degrees) {
      CHECK(deg.residual == 0.0);
      for (auto c : deg.coefficients) CHECK(std::abs(c) < 1e-14);
    }
  }

  SUBCASE("k-invariance of the recovered coefficients") {
    auto truth3 = synthesize(31337, n, 3, l, levels, d_max);
    auto data3 = forward_data(truth3, arcs, grid, rule, 4);
    auto report3 = recover_all(data3, arcs, PipelineShape{n, 3, l, d_max}, rule);
    REQUIRE(!report3.any_failed);
    for (size_t li = 0; li < report.levels.size(); ++li)
      for (size_t d = 0; d < report.levels[li].degrees.size(); ++d) {
        const auto& a = report.levels[li].degrees[d];
        const auto& b = report3.levels[li].degrees[d];
        REQUIRE(a.coefficients.size() == b.coefficients.size());
        for (size_t m = 0; m < a.coefficients.size(); ++m)
          CHECK(std::abs(a.coefficients[m] - b.coefficients[m]) < 1e-10);
      }
  }

  SUBCASE("small additive noise degrades gracefully") {
    const double noise = 1e-8;
    SymbolDataSet noisy = data;
    SplitMix64 rng(4242);
    for (auto& per_energy : noisy.values)
      for (auto& per_arc : per_energy)
        for (auto& v : per_arc) v += noise * std::complex<double>{rng.normal(), rng.normal()};
    auto rec = recover_all(noisy, arcs, shape, rule);
    REQUIRE(!rec.any_failed);
    for (const auto& level : rec.levels) {
      double cond = 1.0;
      for (const auto& deg : level.degrees)
        if (!deg.unconstrained)
          cond = std::max(cond, deg.condition_number * deg.separation_condition);
      CHECK(level_error(level, truth.levels.at(level.r)) < 10.0 * cond * noise);
    }
  }
}

TEST_CASE("out-of-basis data leaves a flagged residual") {
  const auto& rule = QuadratureRule::production();
  const int n = 3, k = 1, l = 1;
  auto truth = synthesize(77, n, k, l, {2}, 3);  // degree-3 coefficients present
  auto arcs = sample_arcs(60, n, 1234);
  auto grid = EnergyGrid::default_grid(energies_required(l));
  auto data = forward_data(truth, arcs, grid, rule);
  // recover with d_max = 1: the degree-3 content cannot be explained
  auto rec = recover_level(data, 0, arcs, PipelineShape{n, k, l, 1}, rule);
  bool flagged = false;
  for (const auto& deg : rec.degrees)
    if (!deg.unconstrained && deg.residual > 1e-3) flagged = true;
  CHECK(flagged);
}

TEST_CASE("underdetermined energy count flags at recovery") {
  const auto& rule = QuadratureRule::gauss_legendre(64);
  const int n = 3, k = 2, l = 2;
  auto truth = synthesize(3, n, k, l, {1}, 2);
  auto arcs = sample_arcs(40, n, 5);
  // hand-build a data set with only l energies
  auto grid_small = EnergyGrid::default_grid(l);
  SymbolDataSet data;
  data.levels = {1};
  data.grid = grid_small;
  data.values.assign(1, std::vector<std::vector<std::complex<double>>>(
                            l, std::vector<std::complex<double>>(arcs.size(), {0.1, 0.0})));
  CHECK_THROWS_AS(recover_level(data, 0, arcs, PipelineShape{n, k, l, 2}, rule),
                  UnderdeterminedError);
  // too few arcs for the basis is a precondition violation
  auto few = sample_arcs(2, n, 6);
  auto grid_ok = EnergyGrid::default_grid(l + 1);
  SymbolDataSet ok_data;
  ok_data.levels = {1};
  ok_data.grid = grid_ok;
  ok_data.values.assign(1, std::vector<std::vector<std::complex<double>>>(
                               l + 1, std::vector<std::complex<double>>(few.size(), {0.1, 0.0})));
  CHECK_THROWS_AS(recover_level(ok_data, 0, few, PipelineShape{n, k, l, 2}, rule),
                  ValidationError);
  auto report = recover_all(data, arcs, PipelineShape{n, k, l, 2}, rule);
  CHECK(report.any_failed);
  CHECK(report.levels[0].error_code == Status::underdetermined);
}

TEST_CASE("injectivity diagnostics") {
  const auto& rule = QuadratureRule::production();

  SUBCASE("single nonzero field has rank 1") {
    std::vector<SymTensorField> basis{aradial_basis(3, 1, 1)[0]};
    auto arcs = sample_arcs(5, 3, 17);
    auto rep = injectivity_report(basis, arcs, 1, rule);
    CHECK(rep.rank == 1);
    CHECK(rep.min_singular_value > 0.0);
  }

  SUBCASE("aradial basis l=1, d_max=2 at j=1: full column rank") {
    auto basis = aradial_basis(3, 1, 2);
    auto arcs = sample_arcs(5 * static_cast<int>(basis.size()), 3, 21);
    auto rep = injectivity_report(basis, arcs, 1, rule);
    CHECK(rep.rank == static_cast<int>(basis.size()));
    CHECK(rep.min_singular_value > 1e-3);
  }

  SUBCASE("appending a potential direction drops the minimum singular value") {
    auto basis = aradial_basis(3, 2, 2);
    auto arcs = sample_arcs(5 * (static_cast<int>(basis.size()) + 1), 3, 23);
    auto pure = injectivity_report(basis, arcs, 0, rule);
    CHECK(pure.rank == static_cast<int>(basis.size()));
    CHECK(pure.min_singular_value > 1e-3);
    auto augmented = basis;
    augmented.push_back(potential_kernel_direction(3, 2));
    auto rep = injectivity_report(augmented, arcs, 0, rule);
    CHECK(rep.min_singular_value < 1e-8 * rep.singular_values[0]);
    CHECK(rep.rank == static_cast<int>(basis.size()));
  }
}

TEST_CASE("kernel directions") {
  const auto& rule = QuadratureRule::production();

  SUBCASE("radial direction is the symmetrized derivative of |z|^2/2") {
    Polynomial half_z2(3);
    for (int i = 0; i < 3; ++i) {
      MultiIndex e(3, 0);
      e[i] = 2;
      half_z2.add_term(e, CRat(1, 2));
    }
    CHECK(radial_potential_direction(3, 1) ==
          sym_derivative(SymTensorField::scalar(half_z2)));
  }

  SUBCASE("radial directions are pointwise invisible along arcs") {
    SplitMix64 rng(3);
    for (int d : {1, 2}) {
      auto mu = radial_potential_direction(3, d);
      for (const auto& arc : sample_arcs(4, 3, 29)) {
        for (int rep = 0; rep < 10; ++rep) {
          double s = 3.0 * rng.uniform01();
          CHECK(std::abs(pair_field(mu, gamma(arc, s), gamma_dot(arc, s))) < 1e-14);
        }
        CHECK(std::abs(weighted_xray(mu, arc, d, rule)) < 1e-13);
      }
    }
  }

  SUBCASE("inject_kernel raises the rank-deficient diagnostic with a profile") {
    const int n = 3, k = 1, l = 1;
    auto truth = synthesize(8, n, k, l, {2}, 1);
    auto arcs = sample_arcs(40, n, 31);
    auto grid = EnergyGrid::default_grid(2);
    auto data = forward_data(truth, arcs, grid, rule);
    RecoveryOptions opts;
    opts.inject_kernel = true;
    try {
      recover_level(data, 0, arcs, PipelineShape{n, k, l, 1}, rule, opts);
      FAIL("expected rank-deficient diagnostic");
    } catch (const RankDeficientError& e) {
      REQUIRE(!e.singular_values.empty());
      CHECK(e.singular_values.back() < 1e-8 * e.singular_values.front());
    }
    auto report = recover_all(data, arcs, PipelineShape{n, k, l, 1}, rule, opts);
    CHECK(report.any_failed);
    CHECK(report.levels[0].error_code == Status::rank_deficient);
  }
}
