#ifndef XSCAT_TRANSPORT_SYMBOLS_HPP
#define XSCAT_TRANSPORT_SYMBOLS_HPP

// Transport-equation solvers for the scattering symbol: the flat recursion
// with its endpoint blow-up, the forcing W_{-r}, the symbol transform, and
// the curved ODE with its closed-form sin^{(n-1)/2} solution.

#include <complex>
#include <functional>
#include <map>

#include "xscat/polynomial.hpp"
#include "xscat/sphere_geometry.hpp"

namespace xscat {

/// Lead coefficients a_{alpha,-r-1} of a level-r perturbation difference,
/// evaluated on the sphere.  W_{-r}(theta, omega, lambda)
///   = sum_{|alpha| <= 2k-1} omega^alpha a_{alpha,-r-1}(theta) lambda^{|alpha|}.
/// Coefficients must be homogeneous polynomials whose degree parity matches
/// r - 1: the polynomial represents a homogeneous function of degree -r-1
/// restricted to the sphere, which fixes its parity there.
class Forcing {
 public:
  Forcing(int n, int k, int r, std::map<MultiIndex, Polynomial> coeffs);

  int dim() const { return n_; }
  int operator_order() const { return k_; }
  int level() const { return r_; }
  const std::map<MultiIndex, Polynomial>& coefficients() const { return coeffs_; }
  bool is_zero() const;

 private:
  int n_;
  int k_;
  int r_;
  std::map<MultiIndex, Polynomial> coeffs_;
};

std::complex<double> w_forcing(const Forcing& forcing, const std::vector<double>& theta,
                               const std::vector<double>& omega, double lambda);

/// Level-r symbol term along the arc (the |z|^{-r} homogeneity factor is
/// bookkeeping and never evaluated):
///   b(s) = i / (2 k lambda^{2k-1} sin^r s) *
///          int_0^s W_{-r}(gamma(s'), omega, lambda) sin^{r-1}(s') ds'.
/// Near s = pi the value grows like (pi - s)^{-r} for generic forcing.  The
/// returned callable always evaluates the analytically-cancelled quotient;
/// past pi/2 the cumulative integral is formed as (total - tail) with the
/// tail integrated on the short interval [s, pi], which stays accurate
/// through s > pi - 1e-3.
std::function<std::complex<double>(double)> solve_flat_transport(const Forcing& forcing,
                                                                 const GreatCircleArc& arc,
                                                                 double lambda,
                                                                 const QuadratureRule& rule);

/// (1/lambda^{2k-1}) int_0^pi W_{-r}(gamma(s), omega, lambda) sin^{r-1}(s) ds:
/// the principal-symbol datum of the scattering-matrix difference along the
/// arc.  Equals (2k/i) lim_{s->pi} sin^r(s) b(s) for the flat solution; the
/// constant is pinned by a regression test.
std::complex<double> symbol_transform(const Forcing& forcing, const GreatCircleArc& arc,
                                      double lambda, const QuadratureRule& rule);

/// sin(s) b' + ((1-n)/2) cos(s) b + i sin(s) d(s) b = forcing, rescaled by
/// k lambda^{2(k-1)} for operator order k.
struct CurvedODE {
  int n = 3;
  std::function<double(double)> subprincipal_d;          // d(beta(s))
  std::function<std::complex<double>(double)> forcing_g; // g(s), may be null
  int k = 1;
  double lambda = 1.0;
};

/// Integrating-factor solution
///   b_j(s) = sin^{(n-1)/2 - j}(s) e^{-i int_0^s d}
///            (C + (1/(k lambda^{2(k-1)})) int_0^s g),
/// which solves sin s b' + ((1-n)/2 + j) cos s b + i sin s d b
///   = sin^{(n-1)/2 - j + 1} e^{-i int d} g / (k lambda^{2(k-1)}).
/// For g = 0, j = 0 this is the closed form C sin^{(n-1)/2}(s) e^{-i int d}.
std::function<std::complex<double>(double)> solve_curved_transport(const CurvedODE& ode,
                                                                   int order_shift,
                                                                   std::complex<double> C);

/// k lambda^{2(k-1)}: the factor by which the boundary Hamiltonian and
/// subprincipal term of Delta^k - lambda^{2k} differ from the k = 1 case.
/// Homogeneous transport solutions are k-independent; inhomogeneous ones
/// scale by the inverse of this factor.
double rescaled_hamiltonian_factor(int k, double lambda);

}  // namespace xscat

#endif
