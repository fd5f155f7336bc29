#ifndef XSCAT_TENSOR_FIELDS_HPP
#define XSCAT_TENSOR_FIELDS_HPP

// Symmetric l-tensor fields on R^n with polynomial coefficients, stored in
// multi-index components: mu = sum_{|alpha| = l} a_alpha dz^alpha, where
// dz^alpha pairs with w^{(x)l} as the plain monomial w^alpha.  Index-tuple
// components psi_{i1..il} (classical index-notation components) relate by
// a_alpha = multinomial(alpha) * psi_alpha; conversions are provided and the
// bookkeeping is covered by round-trip tests.

#include <complex>
#include <map>
#include <vector>

#include "xscat/polynomial.hpp"
#include "xscat/sphere_geometry.hpp"

namespace xscat {

enum class Parity { even, odd, mixed };

class SymTensorField {
 public:
  SymTensorField() = default;
  SymTensorField(int n, int l) : n_(n), l_(l) {
    if (n < 1 || l < 0) throw ValidationError("bad tensor shape");
  }

  static SymTensorField scalar(const Polynomial& p);

  int dim() const { return n_; }
  int order() const { return l_; }
  bool is_zero() const;
  /// Max total degree over stored coefficient polynomials.
  int coefficient_degree() const;
  bool has_homogeneous_coefficients() const;

  const std::map<MultiIndex, Polynomial>& coefficients() const { return coeffs_; }
  Polynomial coefficient(const MultiIndex& alpha) const;
  void set_coefficient(const MultiIndex& alpha, const Polynomial& p);
  void add_coefficient(const MultiIndex& alpha, const Polynomial& p);

  /// Index-tuple component psi_{t} = a_{mi(t)} / multinomial(mi(t)).
  Polynomial tuple_component(const std::vector<int>& tuple) const;
  /// Rebuild the multi-index coefficient from a tuple component.
  static SymTensorField from_tuple_components(
      int n, int l, const std::map<MultiIndex, Polynomial>& tuple_components_by_multiindex);

  SymTensorField& operator+=(const SymTensorField& o);
  friend SymTensorField operator+(SymTensorField a, const SymTensorField& b) { return a += b; }
  SymTensorField scaled(const CRat& c) const;
  friend bool operator==(const SymTensorField& a, const SymTensorField& b);

 private:
  int n_ = 0;
  int l_ = 0;
  std::map<MultiIndex, Polynomial> coeffs_;  // |alpha| = l, zero polys not stored
};

/// <mu(z), w^{(x)l}> = sum_alpha a_alpha(z) w^alpha.
std::complex<double> pair_field(const SymTensorField& mu, const std::vector<double>& z,
                                const std::vector<double>& w);
CRat pair_field_exact(const SymTensorField& mu, const std::vector<Rational>& z,
                      const std::vector<Rational>& w);

/// Contraction of mu with the position vector z in one slot; order drops by
/// one and coefficient degree rises by one.  mu is aradial iff this vanishes
/// on the unit sphere (identically, for homogeneous coefficients).
SymTensorField radial_contraction(const SymTensorField& mu);

/// Tolerance test of aradiality on a fixed deterministic sample of 200
/// sphere points and unit vectors.
bool is_aradial(const SymTensorField& mu, double tol);

/// Euclidean symmetrized derivative: in index-tuple components
/// psi_alpha = (1/l) sum_j d_{alpha_j} phi_{alpha with slot j removed};
/// in multi-index components this is a_beta = sum_i d_i a'_{beta - e_i}.
SymTensorField sym_derivative(const SymTensorField& eta);

/// Signed sum over all 2^l position exchanges between the tuples alpha and
/// beta; identically zero on symmetrized derivatives.
Polynomial exchange_residual(const SymTensorField& mu, const std::vector<int>& alpha,
                             const std::vector<int>& beta);

SymTensorField multiply_poly(const Polynomial& p, const SymTensorField& mu);

/// Classification under the antipodal pullback: with every a_alpha
/// homogeneous, the tensor is even/odd when (-1)^(deg a_alpha + l) is
/// constant +1 / -1 over stored components.  (The convention: z -> -z pulls
/// dz^alpha back with the extra (-1)^l.)
Parity parity(const SymTensorField& mu);

/// Linearly independent aradial symmetric l-tensors with homogeneous
/// polynomial coefficients of each degree d <= d_max, computed as the exact
/// rational nullspace of the contraction map (block-diagonal over the
/// entrywise sum alpha + exponent).  All l = 0 fields are aradial.
std::vector<SymTensorField> aradial_basis(int n, int l, int d_max);

/// All multi-indices over n slots with the given order, lexicographic.
std::vector<MultiIndex> enumerate_multiindices(int n, int order);

/// Exact rational from a double (every finite double is dyadic).
Rational rational_from_double(double x);

/// Flattened field for quadrature loops.
struct CompiledField {
  int n = 0, l = 0;
  std::vector<std::pair<MultiIndex, CompiledPolynomial>> comps;

  CompiledField() = default;
  explicit CompiledField(const SymTensorField& mu);
  std::complex<double> pair(const std::vector<double>& z, const std::vector<double>& w) const;
};

}  // namespace xscat

#endif
