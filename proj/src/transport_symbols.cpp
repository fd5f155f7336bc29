#include "xscat/transport_symbols.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

namespace xscat {

namespace {
constexpr double kPi = std::numbers::pi;

struct CompiledForcing {
  std::vector<std::pair<MultiIndex, CompiledPolynomial>> terms;  // (alpha, a_alpha)

  explicit CompiledForcing(const Forcing& f) {
    for (const auto& [alpha, p] : f.coefficients()) terms.emplace_back(alpha, CompiledPolynomial(p));
  }

  std::complex<double> eval(const std::vector<double>& theta, const std::vector<double>& omega,
                            double lambda) const {
    std::complex<double> acc{0.0, 0.0};
    for (const auto& [alpha, a] : terms) {
      double mono = 1.0;
      int order = 0;
      for (size_t i = 0; i < alpha.size(); ++i) {
        order += alpha[i];
        for (int q = 0; q < alpha[i]; ++q) mono *= omega[i];
      }
      double lp = 1.0;
      for (int q = 0; q < order; ++q) lp *= lambda;
      if (mono != 0.0) acc += a.eval(theta) * mono * lp;
    }
    return acc;
  }
};

double lambda_power(double lambda, int e) {
  double p = 1.0;
  for (int i = 0; i < e; ++i) p *= lambda;
  return p;
}

}  // namespace

Forcing::Forcing(int n, int k, int r, std::map<MultiIndex, Polynomial> coeffs)
    : n_(n), k_(k), r_(r), coeffs_(std::move(coeffs)) {
  if (n_ < 2 || k_ < 1 || r_ < 1) throw ValidationError("forcing needs n >= 2, k >= 1, r >= 1");
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    const auto& [alpha, p] = *it;
    if (static_cast<int>(alpha.size()) != n_ || !mi_valid(alpha))
      throw ValidationError("forcing multi-index dimension mismatch");
    if (mi_order(alpha) > 2 * k_ - 1)
      throw ValidationError("forcing order exceeds 2k-1");
    if (p.is_zero()) {
      it = coeffs_.erase(it);
      continue;
    }
    if (p.vars() != n_) throw ValidationError("forcing coefficient dimension mismatch");
    // Degree bookkeeping: a polynomial restricted to the sphere stands in
    // for a homogeneous function of degree -r-1 there, which pins the parity
    // of every monomial (mixed degrees of one parity span the harmonic
    // bands of a general sphere function).
    for (const auto& [e, c] : p.terms())
      if ((mi_order(e) - (r_ - 1)) % 2 != 0)
        throw ValidationError("forcing coefficient degree parity inconsistent with level");
    ++it;
  }
}

bool Forcing::is_zero() const {
  for (const auto& [a, p] : coeffs_)
    if (!p.is_zero()) return false;
  return true;
}

std::complex<double> w_forcing(const Forcing& forcing, const std::vector<double>& theta,
                               const std::vector<double>& omega, double lambda) {
  if (lambda == 0.0) throw ValidationError("lambda must be nonzero");
  return CompiledForcing(forcing).eval(theta, omega, lambda);
}

std::function<std::complex<double>(double)> solve_flat_transport(const Forcing& forcing,
                                                                 const GreatCircleArc& arc,
                                                                 double lambda,
                                                                 const QuadratureRule& rule) {
  if (lambda == 0.0) throw ValidationError("lambda must be nonzero");
  if (forcing.dim() != arc.dim()) throw ValidationError("forcing/arc dimension mismatch");
  const int r = forcing.level();
  const int k = forcing.operator_order();
  auto cf = std::make_shared<CompiledForcing>(forcing);
  auto integrand = [cf, arc, lambda, r](double s) {
    double sn = std::sin(s);
    double w = 1.0;
    for (int q = 0; q < r - 1; ++q) w *= sn;
    return cf->eval(gamma(arc, s), arc.omega.coords, lambda) * w;
  };
  const std::complex<double> total = integrate_interval(integrand, 0.0, kPi, rule);
  const std::complex<double> prefactor =
      std::complex<double>{0.0, 1.0} / (2.0 * k * lambda_power(lambda, 2 * k - 1));
  return [integrand, total, prefactor, r, rule](double s) {
    std::complex<double> cumulative;
    if (s <= kPi / 2) {
      cumulative = integrate_interval(integrand, 0.0, s, rule);
    } else {
      cumulative = total - integrate_interval(integrand, s, kPi, rule);
    }
    double sn = std::sin(s);
    double sr = 1.0;
    for (int q = 0; q < r; ++q) sr *= sn;
    return prefactor * cumulative / sr;
  };
}

std::complex<double> symbol_transform(const Forcing& forcing, const GreatCircleArc& arc,
                                      double lambda, const QuadratureRule& rule) {
  if (lambda == 0.0) throw ValidationError("lambda must be nonzero");
  if (forcing.dim() != arc.dim()) throw ValidationError("forcing/arc dimension mismatch");
  CompiledForcing cf(forcing);
  auto val = weighted_quadrature(
      [&](double s) { return cf.eval(gamma(arc, s), arc.omega.coords, lambda); },
      forcing.level() - 1, rule);
  return val / lambda_power(lambda, 2 * forcing.operator_order() - 1);
}

std::function<std::complex<double>(double)> solve_curved_transport(const CurvedODE& ode,
                                                                   int order_shift,
                                                                   std::complex<double> C) {
  if (order_shift < 0) throw ValidationError("order shift must be nonnegative");
  if (ode.n < 2) throw ValidationError("curved ODE needs n >= 2");
  if (ode.k < 1) throw ValidationError("curved ODE needs k >= 1");
  const double scale = rescaled_hamiltonian_factor(ode.k, ode.lambda);
  const double exponent = 0.5 * (ode.n - 1) - order_shift;
  auto d = ode.subprincipal_d;
  auto g = ode.forcing_g;
  const auto rule = QuadratureRule::gauss_legendre(64);
  return [=](double s) {
    double phase = 0.0;
    if (d) {
      phase = integrate_interval([&](double u) { return std::complex<double>{d(u), 0.0}; }, 0.0,
                                 s, rule)
                  .real();
    }
    std::complex<double> u = C;
    if (g) {
      u += integrate_interval([&](double t) { return g(t); }, 0.0, s, rule) / scale;
    }
    return std::pow(std::sin(s), exponent) * std::exp(std::complex<double>{0.0, -phase}) * u;
  };
}

double rescaled_hamiltonian_factor(int k, double lambda) {
  if (lambda == 0.0) throw ValidationError("lambda must be nonzero");
  if (k < 1) throw ValidationError("operator order must be positive");
  return k * lambda_power(lambda, 2 * (k - 1));
}

}  // namespace xscat
