#include "xscat/sphere_geometry.hpp"

#include <cmath>
#include <numbers>

namespace xscat {

namespace {
constexpr double kPi = std::numbers::pi;
}

double SplitMix64::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  double u2 = uniform01();
  double r = std::sqrt(-2.0 * std::log(u1));
  have_spare_ = true;
  spare_ = r * std::sin(2.0 * kPi * u2);
  return r * std::cos(2.0 * kPi * u2);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ull * (index + 1)));
  return g.next();
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

SpherePoint SpherePoint::checked(std::vector<double> coords, double tol) {
  if (coords.size() < 2) throw ValidationError("sphere point needs dimension >= 2");
  if (std::abs(norm(coords) - 1.0) > tol) throw ValidationError("sphere point is not unit");
  return SpherePoint{std::move(coords)};
}

SpherePoint SpherePoint::normalized(std::vector<double> coords) {
  double n = norm(coords);
  if (n == 0.0) throw ValidationError("cannot normalize the zero vector");
  for (double& c : coords) c /= n;
  return SpherePoint{std::move(coords)};
}

SpherePoint SpherePoint::axis(int n, int i) {
  std::vector<double> c(n, 0.0);
  c[i] = 1.0;
  return SpherePoint{std::move(c)};
}

GreatCircleArc GreatCircleArc::checked(SpherePoint omega, SpherePoint v, double tol) {
  if (omega.dim() != v.dim()) throw ValidationError("arc frame dimension mismatch");
  if (std::abs(norm(omega.coords) - 1.0) > tol || std::abs(norm(v.coords) - 1.0) > tol)
    throw ValidationError("arc frame vectors must be unit");
  if (std::abs(dot(omega.coords, v.coords)) > tol)
    throw ValidationError("arc frame vectors must be orthogonal");
  return GreatCircleArc{std::move(omega), std::move(v)};
}

std::vector<double> gamma(const GreatCircleArc& arc, double s) {
  const double c = std::cos(s), sn = std::sin(s);
  std::vector<double> p(arc.dim());
  for (int i = 0; i < arc.dim(); ++i) p[i] = c * arc.omega[i] + sn * arc.v[i];
  return p;
}

std::vector<double> gamma_dot(const GreatCircleArc& arc, double s) {
  const double c = std::cos(s), sn = std::sin(s);
  std::vector<double> p(arc.dim());
  for (int i = 0; i < arc.dim(); ++i) p[i] = -sn * arc.omega[i] + c * arc.v[i];
  return p;
}

std::vector<std::vector<double>> rotate_to_pole(const SpherePoint& omega) {
  const int n = omega.dim();
  std::vector<std::vector<double>> r(n, std::vector<double>(n, 0.0));
  std::vector<double> u = omega.coords;
  u[n - 1] -= 1.0;  // u = omega - e_n
  double u2 = dot(u, u);
  for (int i = 0; i < n; ++i) r[i][i] = 1.0;
  if (u2 < 1e-24) return r;  // omega = e_n
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r[i][j] -= 2.0 * u[i] * u[j] / u2;
  return r;
}

std::vector<GreatCircleArc> sample_arcs(int count, int n, std::uint64_t seed) {
  if (count < 1) throw ValidationError("arc count must be positive");
  if (n < 2) throw ValidationError("arc dimension must be >= 2");
  std::vector<GreatCircleArc> arcs;
  arcs.reserve(count);
  for (int idx = 0; idx < count; ++idx) {
    SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(idx)));
    while (true) {
      std::vector<double> g1(n), g2(n);
      for (double& x : g1) x = rng.normal();
      for (double& x : g2) x = rng.normal();
      double n1 = norm(g1);
      if (n1 < 1e-8) continue;
      for (double& x : g1) x /= n1;
      double proj = dot(g2, g1);
      for (int i = 0; i < n; ++i) g2[i] -= proj * g1[i];
      double n2 = norm(g2);
      if (n2 < 1e-8) continue;
      for (double& x : g2) x /= n2;
      arcs.push_back(GreatCircleArc{SpherePoint{std::move(g1)}, SpherePoint{std::move(g2)}});
      break;
    }
  }
  return arcs;
}

QuadratureRule QuadratureRule::gauss_legendre(int order) {
  if (order < 1) throw ValidationError("quadrature order must be positive");
  // Nodes of P_m on [-1, 1] by Newton iteration from the Chebyshev guess.
  const int m = order;
  std::vector<double> x(m), w(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (m + 0.5));
    double p0 = 0.0, p1 = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      p0 = 1.0;
      p1 = 0.0;
      for (int j = 0; j < m; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
      }
      double dp = m * (t * p0 - p1) / (t * t - 1.0);
      double dt = p0 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) {
        p0 = 1.0;
        p1 = 0.0;
        for (int j = 0; j < m; ++j) {
          double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
        }
        break;
      }
    }
    double dp = m * (t * p0 - p1) / (t * t - 1.0);
    x[i] = -t;
    x[m - 1 - i] = t;
    w[i] = w[m - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
  QuadratureRule rule;
  rule.order = m;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (int i = 0; i < m; ++i) {
    rule.nodes[i] = 0.5 * kPi * (x[i] + 1.0);
    rule.weights[i] = 0.5 * kPi * w[i];
  }
  return rule;
}

const QuadratureRule& QuadratureRule::production() {
  static const QuadratureRule rule = gauss_legendre(128);
  return rule;
}

std::complex<double> weighted_quadrature(const std::function<std::complex<double>(double)>& f,
                                         int j, const QuadratureRule& rule) {
  if (j < 0) throw ValidationError("weight exponent must be nonnegative");
  std::complex<double> acc{0.0, 0.0};
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    double s = rule.nodes[i];
    double wt = rule.weights[i];
    double sj = 1.0;
    double sn = std::sin(s);
    for (int q = 0; q < j; ++q) sj *= sn;
    acc += wt * sj * f(s);
  }
  return acc;
}

double weighted_quadrature_real(const std::function<double(double)>& f, int j,
                                const QuadratureRule& rule) {
  if (j < 0) throw ValidationError("weight exponent must be nonnegative");
  double acc = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    double s = rule.nodes[i];
    double sj = 1.0;
    double sn = std::sin(s);
    for (int q = 0; q < j; ++q) sj *= sn;
    acc += rule.weights[i] * sj * f(s);
  }
  return acc;
}

std::complex<double> integrate_interval(const std::function<std::complex<double>(double)>& f,
                                        double a, double b, const QuadratureRule& rule) {
  // Reuse the [0, pi] rule affinely; weights scale by (b - a) / pi.
  std::complex<double> acc{0.0, 0.0};
  const double scale = (b - a) / kPi;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    double s = a + scale * rule.nodes[i];
    acc += scale * rule.weights[i] * f(s);
  }
  return acc;
}

}  // namespace xscat
