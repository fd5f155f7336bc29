#ifndef XSCAT_XRAY_TRANSFORM_HPP
#define XSCAT_XRAY_TRANSFORM_HPP

// The weighted geodesic X-ray transform of symmetric tensor fields over half
// great circles, its shift-differentiation structure, the aradial
// re-expression identity, and forward-matrix assembly.

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "xscat/sphere_geometry.hpp"
#include "xscat/tensor_fields.hpp"

namespace xscat {

/// One transform evaluation: arc, weight exponent j (= l + r - 1 in the
/// homogeneity bookkeeping), shift alpha, value.
struct TransformSample {
  GreatCircleArc arc;
  int j = 0;
  double alpha_shift = 0.0;
  std::complex<double> value{0.0, 0.0};
};

/// int_0^pi <mu(gamma(s)), gamma'(s)^{(x)l}> sin^j(s) ds.
std::complex<double> weighted_xray(const SymTensorField& mu, const GreatCircleArc& arc, int j,
                                   const QuadratureRule& rule);
std::complex<double> weighted_xray(const CompiledField& mu, const GreatCircleArc& arc, int j,
                                   const QuadratureRule& rule);

/// int_0^pi <mu(gamma(s + alpha)), gamma'(s + alpha)^{(x)l}> sin^j(s) ds;
/// alpha = 0 reduces to weighted_xray and alpha is 2pi-periodic.
std::complex<double> shifted_xray(const SymTensorField& mu, const GreatCircleArc& arc, int j,
                                  double alpha, const QuadratureRule& rule);

struct ShiftOdeCheck {
  std::complex<double> lhs;  // I_j''(alpha) (central difference) + j^2 I_j(alpha)
  std::complex<double> rhs;  // j (j-1) I_{j-2}(alpha)
  double defect = 0.0;
};

/// Quantitative form of the shift-differentiation reduction
/// I_j'' + j^2 I_j = j (j-1) I_{j-2}, j >= 2 (validated symbolically in the
/// test oracles before being relied on here).
ShiftOdeCheck shift_ode_check(const SymTensorField& mu, const GreatCircleArc& arc, int j,
                              double alpha, const QuadratureRule& rule, double h = 1e-4);

/// int_0^pi a_{(0,..,0,l)}(gamma(s)) sin^{r-1}(s) ds, the component form of
/// the transform in the frame rotated so arc.omega is the north pole.  In
/// that frame the (0,..,0,l) component at gamma(s) is exactly
/// <mu(gamma(s)), omega^{(x)l}>, which is how it is evaluated.  For aradial
/// mu this equals (-1)^l weighted_xray(mu, arc, l + r - 1).
std::complex<double> component_form_value(const SymTensorField& mu, const GreatCircleArc& arc,
                                          int r, const QuadratureRule& rule);

struct FtcKernelCheck {
  std::complex<double> integral;             // weighted_xray(sym_derivative(eta), arc, 0)
  std::complex<double> boundary_difference;  // <eta, gamma'>|_pi - <eta, gamma'>|_0
  double defect = 0.0;
};

/// Fundamental-theorem surrogate for the potential-tensor kernel direction:
/// exact for scalar eta and for aradial eta along great circles; the
/// production kernel tests use parity-canceling boundary terms.
FtcKernelCheck ftc_kernel_check(const SymTensorField& eta, const GreatCircleArc& arc,
                                const QuadratureRule& rule);

/// Rows = arcs, columns = basis: entry (i, m) = weighted_xray(basis[m],
/// arcs[i], j, rule).  Basis coefficients are real in every pipeline use,
/// so the matrix is real.
Eigen::MatrixXd forward_matrix(const std::vector<SymTensorField>& basis,
                               const std::vector<GreatCircleArc>& arcs, int j,
                               const QuadratureRule& rule);

}  // namespace xscat

#endif
