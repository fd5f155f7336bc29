#ifndef XSCAT_SPHERE_GEOMETRY_HPP
#define XSCAT_SPHERE_GEOMETRY_HPP

// Points, half great circles and weighted quadrature on [0, pi]: the
// geometric substrate of every transform in the library.

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "xscat/errors.hpp"

namespace xscat {

/// Deterministic 64-bit generator (splitmix64).  Used everywhere instead of
/// <random> engines so that seeded output is identical across platforms and
/// standard libraries.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [-1, 1].
  double uniform_sym() { return 2.0 * uniform01() - 1.0; }

  /// Standard normal via Box-Muller (deterministic, no rejection).
  double normal();

 private:
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Derive an independent stream for item `index` of a seeded batch.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Point on the unit sphere in R^n.
struct SpherePoint {
  std::vector<double> coords;

  static SpherePoint checked(std::vector<double> coords, double tol = 1e-12);
  static SpherePoint normalized(std::vector<double> coords);
  static SpherePoint axis(int n, int i);

  int dim() const { return static_cast<int>(coords.size()); }
  double operator[](int i) const { return coords[i]; }
};

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm(const std::vector<double>& a);

/// Half great circle gamma(s) = cos(s) omega + sin(s) v, s in [0, pi].
/// Stored rotation-free as an orthonormal pair (start point, initial
/// tangent); gamma(pi) = -omega as an algebraic identity.
struct GreatCircleArc {
  SpherePoint omega;
  SpherePoint v;

  static GreatCircleArc checked(SpherePoint omega, SpherePoint v, double tol = 1e-12);
  int dim() const { return omega.dim(); }
};

std::vector<double> gamma(const GreatCircleArc& arc, double s);
std::vector<double> gamma_dot(const GreatCircleArc& arc, double s);

/// Orthogonal matrix (row-major n x n) with R omega = e_n, realized as the
/// Householder reflection through omega - e_n; identity when omega = e_n.
std::vector<std::vector<double>> rotate_to_pole(const SpherePoint& omega);

/// Deterministic sample from the uniform distribution on orthonormal
/// 2-frames; arc i depends on (seed, i) only, so batches are stable under
/// any execution order.
std::vector<GreatCircleArc> sample_arcs(int count, int n, std::uint64_t seed);

/// Gauss-Legendre rule mapped to [0, pi].  `order` is the node count; the
/// sin^j weight of the transforms is folded into the integrand, which is
/// what makes the rule spectrally accurate on the trigonometric-polynomial
/// integrands that dominate this library: trig polynomials of degree up to
/// order/2 integrate to better than 1e-12 once order >= 32.
struct QuadratureRule {
  std::vector<double> nodes;    // in (0, pi)
  std::vector<double> weights;  // positive
  int order = 0;

  static QuadratureRule gauss_legendre(int order);
  /// Production default (128 nodes).
  static const QuadratureRule& production();
};

/// Integral over [0, pi] of f(s) sin^j(s) ds.
std::complex<double> weighted_quadrature(const std::function<std::complex<double>(double)>& f,
                                         int j, const QuadratureRule& rule);
double weighted_quadrature_real(const std::function<double(double)>& f, int j,
                                const QuadratureRule& rule);

/// Gauss-Legendre integral of f over [a, b] (used by cumulative transport
/// integrals).
std::complex<double> integrate_interval(const std::function<std::complex<double>(double)>& f,
                                        double a, double b, const QuadratureRule& rule);

}  // namespace xscat

#endif
