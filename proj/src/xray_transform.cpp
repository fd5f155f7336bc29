#include "xscat/xray_transform.hpp"

#include <cmath>
#include <numbers>

namespace xscat {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::complex<double> weighted_xray(const CompiledField& mu, const GreatCircleArc& arc, int j,
                                   const QuadratureRule& rule) {
  return weighted_quadrature(
      [&](double s) { return mu.pair(gamma(arc, s), gamma_dot(arc, s)); }, j, rule);
}

std::complex<double> weighted_xray(const SymTensorField& mu, const GreatCircleArc& arc, int j,
                                   const QuadratureRule& rule) {
  return weighted_xray(CompiledField(mu), arc, j, rule);
}

std::complex<double> shifted_xray(const SymTensorField& mu, const GreatCircleArc& arc, int j,
                                  double alpha, const QuadratureRule& rule) {
  CompiledField cf(mu);
  return weighted_quadrature(
      [&](double s) { return cf.pair(gamma(arc, s + alpha), gamma_dot(arc, s + alpha)); }, j,
      rule);
}

ShiftOdeCheck shift_ode_check(const SymTensorField& mu, const GreatCircleArc& arc, int j,
                              double alpha, const QuadratureRule& rule, double h) {
  if (j < 2) throw ValidationError("shift ODE check needs j >= 2");
  CompiledField cf(mu);
  auto ij = [&](double a) {
    return weighted_quadrature(
        [&](double s) { return cf.pair(gamma(arc, s + a), gamma_dot(arc, s + a)); }, j, rule);
  };
  auto ijm2 = weighted_quadrature(
      [&](double s) {
        return cf.pair(gamma(arc, s + alpha), gamma_dot(arc, s + alpha));
      },
      j - 2, rule);
  std::complex<double> second = (ij(alpha + h) - 2.0 * ij(alpha) + ij(alpha - h)) / (h * h);
  ShiftOdeCheck out;
  out.lhs = second + static_cast<double>(j) * static_cast<double>(j) * ij(alpha);
  out.rhs = static_cast<double>(j) * static_cast<double>(j - 1) * ijm2;
  out.defect = std::abs(out.lhs - out.rhs);
  return out;
}

std::complex<double> component_form_value(const SymTensorField& mu, const GreatCircleArc& arc,
                                          int r, const QuadratureRule& rule) {
  if (r < 1) throw ValidationError("component form needs r >= 1");
  if (!is_aradial(mu, 1e-8)) throw ValidationError("component form requires an aradial field");
  CompiledField cf(mu);
  // Rotated-frame (0,..,0,l) component along the arc: the rotation R with
  // R omega = e_n pulls e_n back to omega, so the component at gamma(s) is
  // the pairing with omega^{(x)l}.
  return weighted_quadrature(
      [&](double s) { return cf.pair(gamma(arc, s), arc.omega.coords); }, r - 1, rule);
}

FtcKernelCheck ftc_kernel_check(const SymTensorField& eta, const GreatCircleArc& arc,
                                const QuadratureRule& rule) {
  FtcKernelCheck out;
  out.integral = weighted_xray(sym_derivative(eta), arc, 0, rule);
  auto g0 = gamma(arc, 0.0);
  auto gpi = gamma(arc, kPi);
  auto d0 = gamma_dot(arc, 0.0);
  auto dpi = gamma_dot(arc, kPi);
  out.boundary_difference = pair_field(eta, gpi, dpi) - pair_field(eta, g0, d0);
  out.defect = std::abs(out.integral - out.boundary_difference);
  return out;
}

Eigen::MatrixXd forward_matrix(const std::vector<SymTensorField>& basis,
                               const std::vector<GreatCircleArc>& arcs, int j,
                               const QuadratureRule& rule) {
  if (!basis.empty()) {
    const int l = basis.front().order();
    for (const auto& b : basis)
      if (b.order() != l) throw ValidationError("forward matrix basis must share one order");
  }
  Eigen::MatrixXd m(static_cast<int>(arcs.size()), static_cast<int>(basis.size()));
  std::vector<CompiledField> compiled;
  compiled.reserve(basis.size());
  for (const auto& b : basis) compiled.emplace_back(b);
  for (size_t i = 0; i < arcs.size(); ++i)
    for (size_t c = 0; c < compiled.size(); ++c)
      m(static_cast<int>(i), static_cast<int>(c)) =
          weighted_xray(compiled[c], arcs[i], j, rule).real();
  return m;
}

}  // namespace xscat
