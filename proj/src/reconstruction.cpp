#include "xscat/reconstruction.hpp"

#include <algorithm>
#include <cmath>

#include "xscat/parallel.hpp"

namespace xscat {

std::vector<SymTensorField> admissible_basis(int n, int d, int d_max, int r) {
  if (r < 1) throw ValidationError("level must be >= 1");
  std::vector<SymTensorField> out;
  for (const auto& f : aradial_basis(n, d, d_max)) {
    if ((f.coefficient_degree() - (r - 1)) % 2 == 0) out.push_back(f);
  }
  return out;
}

PerturbationAsymptotics synthesize(std::uint64_t seed, int n, int k, int l,
                                   const std::vector<int>& r_levels, int d_max) {
  if (n < 3) throw ValidationError("pipeline needs n >= 3");
  if (k < 1) throw ValidationError("operator power must be positive");
  if (l < 0 || l > 2 * k - 1) throw ValidationError("perturbation order must satisfy 0 <= l <= 2k-1");
  if (d_max < 0) throw ValidationError("d_max must be nonnegative");
  if (r_levels.empty()) throw ValidationError("need at least one level");
  {
    std::vector<int> sorted = r_levels;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() < 1) throw ValidationError("levels must be >= 1");
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ValidationError("levels must be distinct");
  }

  PerturbationAsymptotics truth;
  truth.n = n;
  truth.k = k;
  truth.l = l;
  truth.d_max = d_max;

  bool any_nonempty = false;
  for (int r : r_levels) {
    LevelTruth level;
    for (int d = 0; d <= l; ++d) {
      auto basis = admissible_basis(n, d, d_max, r);
      // Draw depends on (seed, r, d) only: identical truths across k.
      SplitMix64 rng(derive_seed(seed, (static_cast<std::uint64_t>(r) << 8) | d));
      std::vector<double> coords(basis.size());
      for (size_t m = 0; m < basis.size(); ++m) {
        long num = static_cast<long>(rng.next() % 513) - 256;  // dyadic in [-1, 1]
        coords[m] = static_cast<double>(num) / 256.0;
        if (num != 0) {
          for (const auto& [alpha, p] : basis[m].coefficients()) {
            Polynomial scaledp = p.scaled(CRat(Rational(num, 256)));
            auto it = level.coeffs.find(alpha);
            if (it == level.coeffs.end())
              level.coeffs[alpha] = scaledp;
            else
              it->second += scaledp;
          }
        }
      }
      if (!basis.empty()) any_nonempty = true;
      level.basis_coords[d] = std::move(coords);
    }
    // drop exact zero coefficient entries
    for (auto it = level.coeffs.begin(); it != level.coeffs.end();)
      it = it->second.is_zero() ? level.coeffs.erase(it) : std::next(it);
    truth.levels[r] = std::move(level);
  }
  if (!any_nonempty)
    throw ValidationError("no admissible aradial basis elements at the requested orders");
  return truth;
}

namespace {

Forcing level_forcing(const PerturbationAsymptotics& truth, int r) {
  auto it = truth.levels.find(r);
  if (it == truth.levels.end()) throw ValidationError("unknown level");
  return Forcing(truth.n, truth.k, r, it->second.coeffs);
}

double lambda_power(double lambda, int e) {
  double p = 1.0;
  for (int i = 0; i < e; ++i) p *= lambda;
  return p;
}

}  // namespace

SymbolDataSet forward_data(const PerturbationAsymptotics& truth,
                           const std::vector<GreatCircleArc>& arcs, const EnergyGrid& grid,
                           const QuadratureRule& rule, int threads) {
  if (grid.size() < energies_required(truth.l))
    throw UnderdeterminedError("energy grid smaller than l+1");
  SymbolDataSet data;
  data.grid = grid;
  for (const auto& [r, level] : truth.levels) data.levels.push_back(r);

  const int nl = static_cast<int>(data.levels.size());
  const int ne = grid.size();
  const int na = static_cast<int>(arcs.size());
  data.values.assign(nl, std::vector<std::vector<std::complex<double>>>(
                             ne, std::vector<std::complex<double>>(na)));

  std::vector<Forcing> forcings;
  forcings.reserve(nl);
  for (int li = 0; li < nl; ++li) forcings.push_back(level_forcing(truth, data.levels[li]));

  parallel_for(nl * ne * na, threads, [&](int idx) {
    const int li = idx / (ne * na);
    const int ei = (idx / na) % ne;
    const int ai = idx % na;
    data.values[li][ei][ai] =
        symbol_transform(forcings[li], arcs[ai], grid.lambdas[ei], rule);
  });
  return data;
}

namespace {

struct LeastSquares {
  std::vector<std::complex<double>> x;
  double residual = 0.0;
};

LeastSquares solve_block(const Eigen::MatrixXd& a, const Eigen::VectorXcd& y, double tikhonov) {
  Eigen::VectorXd re(y.size()), im(y.size());
  for (int i = 0; i < y.size(); ++i) {
    re(i) = y(i).real();
    im(i) = y(i).imag();
  }
  Eigen::VectorXd xre, xim;
  if (tikhonov > 0.0) {
    Eigen::MatrixXd normal = a.transpose() * a;
    normal.diagonal().array() += tikhonov;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
    xre = ldlt.solve(a.transpose() * re);
    xim = ldlt.solve(a.transpose() * im);
  } else {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    xre = qr.solve(re);
    xim = qr.solve(im);
  }
  LeastSquares out;
  out.x.resize(xre.size());
  for (int i = 0; i < xre.size(); ++i) out.x[i] = {xre(i), xim(i)};
  double num = std::sqrt((a * xre - re).squaredNorm() + (a * xim - im).squaredNorm());
  double den = std::sqrt(re.squaredNorm() + im.squaredNorm());
  out.residual = den > 1e-300 ? num / den : num;
  return out;
}

}  // namespace

LevelRecovery recover_level(const SymbolDataSet& data, int level_index,
                            const std::vector<GreatCircleArc>& arcs, const PipelineShape& shape,
                            const QuadratureRule& rule, const RecoveryOptions& options) {
  if (level_index < 0 || level_index >= static_cast<int>(data.levels.size()))
    throw ValidationError("bad level index");
  const int r = data.levels[level_index];
  const int na = static_cast<int>(arcs.size());
  const int ne = data.grid.size();
  if (na < 1) throw ValidationError("no arcs");

  // lambda^{2k-1}-scaled values are polynomial in lambda; separate degrees.
  std::vector<std::vector<std::complex<double>>> scaled(
      ne, std::vector<std::complex<double>>(na));
  for (int ei = 0; ei < ne; ++ei) {
    const double lp = lambda_power(data.grid.lambdas[ei], 2 * shape.k - 1);
    for (int ai = 0; ai < na; ++ai) scaled[ei][ai] = data.values[level_index][ei][ai] * lp;
  }
  auto separations = separate_fields(scaled, data.grid, shape.l);

  LevelRecovery out;
  out.r = r;
  for (int d = 0; d <= shape.l; ++d) {
    DegreeRecovery rec;
    rec.degree = d;
    rec.weight = d + r - 1;
    rec.separation_condition = separations.empty() ? 0.0 : separations.front().condition_number;

    Eigen::VectorXcd y(na);
    const double sign = (d % 2 == 0) ? 1.0 : -1.0;
    for (int ai = 0; ai < na; ++ai) y(ai) = sign * separations[ai].coefficients[d];

    auto basis = admissible_basis(shape.n, d, shape.d_max, r);
    if (options.inject_kernel && d >= 1)
      basis.push_back(radial_potential_direction(shape.n, d));

    if (basis.empty()) {
      rec.unconstrained = true;
      rec.residual = y.norm();
      out.degrees.push_back(std::move(rec));
      continue;
    }
    if (na < static_cast<int>(basis.size()))
      throw ValidationError("need at least as many arcs as basis elements");

    Eigen::MatrixXd a = forward_matrix(basis, arcs, rec.weight, rule);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto& sv = svd.singularValues();
    rec.singular_values.assign(sv.data(), sv.data() + sv.size());
    const double smax = sv(0), smin = sv(sv.size() - 1);
    rec.condition_number = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(smin > options.rank_tol * smax)) {
      throw RankDeficientError(
          "rank-deficient forward matrix at level " + std::to_string(r) + ", degree " +
              std::to_string(d) + " (non-injective configuration)",
          rec.singular_values);
    }

    auto ls = solve_block(a, y, options.tikhonov);
    rec.coefficients = std::move(ls.x);
    rec.residual = ls.residual;

    SymTensorField recovered(shape.n, d);
    for (size_t m = 0; m < basis.size(); ++m) {
      CRat c(rational_from_double(rec.coefficients[m].real()),
             rational_from_double(rec.coefficients[m].imag()));
      if (!c.is_zero()) recovered += basis[m].scaled(c);
    }
    rec.recovered = std::move(recovered);
    out.degrees.push_back(std::move(rec));
  }
  return out;
}

RecoveryReport recover_all(const SymbolDataSet& data, const std::vector<GreatCircleArc>& arcs,
                           const PipelineShape& shape, const QuadratureRule& rule,
                           const RecoveryOptions& options) {
  RecoveryReport report;
  for (int li = 0; li < static_cast<int>(data.levels.size()); ++li) {
    try {
      report.levels.push_back(recover_level(data, li, arcs, shape, rule, options));
    } catch (const Error& e) {
      LevelRecovery failed;
      failed.r = data.levels[li];
      failed.failed = true;
      failed.error_code = e.code();
      failed.error = e.what();
      report.levels.push_back(std::move(failed));
      report.any_failed = true;
    }
  }
  return report;
}

InjectivityReport injectivity_report(const std::vector<SymTensorField>& basis,
                                     const std::vector<GreatCircleArc>& arcs, int j,
                                     const QuadratureRule& rule, double rank_tol) {
  if (static_cast<int>(arcs.size()) < static_cast<int>(basis.size()))
    throw ValidationError("need at least as many arcs as basis elements");
  Eigen::MatrixXd a = forward_matrix(basis, arcs, j, rule);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& sv = svd.singularValues();
  InjectivityReport out;
  out.singular_values.assign(sv.data(), sv.data() + sv.size());
  if (sv.size() == 0) return out;
  out.min_singular_value = sv(sv.size() - 1);
  out.condition_number = out.min_singular_value > 0.0
                             ? sv(0) / out.min_singular_value
                             : std::numeric_limits<double>::infinity();
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > rank_tol * sv(0)) ++out.rank;
  return out;
}

SymTensorField radial_potential_direction(int n, int d) {
  if (d < 1) throw ValidationError("radial direction needs order >= 1");
  SymTensorField out(n, d);
  for (const auto& alpha : enumerate_multiindices(n, d))
    out.set_coefficient(alpha,
                        Polynomial::monomial(n, alpha, CRat(Rational(multinomial(alpha), 1))));
  return out;
}

SymTensorField potential_kernel_direction(int n, int l) {
  if (n < 3) throw ValidationError("kernel direction needs n >= 3");
  if (l == 1) {
    // eta = z_1^2 (even scalar): boundary terms cancel by parity.
    Polynomial eta(n);
    MultiIndex e(n, 0);
    e[0] = 2;
    eta.add_term(e, CRat(1));
    return sym_derivative(SymTensorField::scalar(eta));
  }
  if (l == 2) {
    // eta = |z|^2 (z_1 dz_2 - z_2 dz_1): aradial, even as a tensor, with a
    // nonvanishing symmetrized derivative.
    Polynomial z2(n);
    for (int i = 0; i < n; ++i) {
      MultiIndex e(n, 0);
      e[i] = 2;
      z2.add_term(e, CRat(1));
    }
    SymTensorField eta(n, 1);
    MultiIndex e1(n, 0), e2(n, 0);
    e1[0] = 1;
    e2[1] = 1;
    eta.set_coefficient(e2, z2 * Polynomial::variable(n, 0));
    eta.set_coefficient(e1, -(z2 * Polynomial::variable(n, 1)));
    return sym_derivative(eta);
  }
  throw ValidationError("kernel direction implemented for l in {1, 2}");
}

}  // namespace xscat
