#ifndef XSCAT_POLYNOMIAL_HPP
#define XSCAT_POLYNOMIAL_HPP

// Multivariate polynomials over exact complex rationals.  These carry the
// coefficients of symmetric tensor fields; evaluation to floating point
// happens only when a quadrature rule needs point values.

#include <complex>
#include <map>
#include <vector>

#include "xscat/errors.hpp"
#include "xscat/rational.hpp"

namespace xscat {

// A multi-index is a vector of n nonnegative integers.  It doubles as a
// monomial exponent and as a symmetric-tensor component label.
using MultiIndex = std::vector<int>;

int mi_order(const MultiIndex& a);
bool mi_valid(const MultiIndex& a);

/// l! / prod(alpha_i!) for |alpha| = l: the number of index tuples that sort
/// to the multi-index alpha.
BigInt multinomial(const MultiIndex& alpha);

/// Multi-index of an index tuple (entries 0-based variable indices).
MultiIndex tuple_to_multiindex(const std::vector<int>& tuple, int n);

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int n) : n_(n) {}
  Polynomial(int n, const CRat& constant);

  static Polynomial monomial(int n, const MultiIndex& exponent, const CRat& coeff);
  static Polynomial variable(int n, int i);

  int vars() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  /// True when every stored monomial has the same total degree (zero counts
  /// as homogeneous of any degree).
  bool is_homogeneous() const;

  const std::map<MultiIndex, CRat>& terms() const { return terms_; }
  CRat coefficient(const MultiIndex& e) const;
  CRat constant_term() const;

  void add_term(const MultiIndex& exponent, const CRat& coeff);

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial operator-() const;
  friend bool operator==(const Polynomial& a, const Polynomial& b);

  Polynomial scaled(const CRat& c) const;
  Polynomial derivative(int i) const;
  /// Derivative along an index tuple (composition of single derivatives).
  Polynomial derivative_tuple(const std::vector<int>& tuple) const;
  Polynomial multiplied_by_variable(int i) const;

  std::complex<double> eval(const std::vector<double>& z) const;
  CRat eval_exact(const std::vector<Rational>& z) const;

 private:
  int n_ = 0;
  std::map<MultiIndex, CRat> terms_;  // exponent -> coefficient, no zeros stored
};

/// Flattened form for fast repeated evaluation inside quadrature loops.
struct CompiledPolynomial {
  std::vector<std::pair<MultiIndex, std::complex<double>>> terms;

  explicit CompiledPolynomial(const Polynomial& p);
  CompiledPolynomial() = default;

  std::complex<double> eval(const std::vector<double>& z) const;
};

}  // namespace xscat

#endif
