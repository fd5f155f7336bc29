#include "xscat/tensor_fields.hpp"

#include <algorithm>
#include <cmath>

namespace xscat {

SymTensorField SymTensorField::scalar(const Polynomial& p) {
  SymTensorField f(p.vars(), 0);
  f.set_coefficient(MultiIndex(p.vars(), 0), p);
  return f;
}

bool SymTensorField::is_zero() const {
  for (const auto& [a, p] : coeffs_)
    if (!p.is_zero()) return false;
  return true;
}

int SymTensorField::coefficient_degree() const {
  int d = 0;
  for (const auto& [a, p] : coeffs_) d = std::max(d, p.degree());
  return d;
}

bool SymTensorField::has_homogeneous_coefficients() const {
  for (const auto& [a, p] : coeffs_)
    if (!p.is_homogeneous()) return false;
  return true;
}

Polynomial SymTensorField::coefficient(const MultiIndex& alpha) const {
  auto it = coeffs_.find(alpha);
  return it == coeffs_.end() ? Polynomial(n_) : it->second;
}

void SymTensorField::set_coefficient(const MultiIndex& alpha, const Polynomial& p) {
  if (static_cast<int>(alpha.size()) != n_ || !mi_valid(alpha) || mi_order(alpha) != l_)
    throw ValidationError("tensor component index must have order l");
  if (!p.is_zero() && p.vars() != n_) throw ValidationError("coefficient dimension mismatch");
  if (p.is_zero())
    coeffs_.erase(alpha);
  else
    coeffs_[alpha] = p;
}

void SymTensorField::add_coefficient(const MultiIndex& alpha, const Polynomial& p) {
  Polynomial q = coefficient(alpha);
  q += p;
  set_coefficient(alpha, q);
}

Polynomial SymTensorField::tuple_component(const std::vector<int>& tuple) const {
  if (static_cast<int>(tuple.size()) != l_) throw ValidationError("tuple length must equal order");
  MultiIndex alpha = tuple_to_multiindex(tuple, n_);
  CRat inv_mult{Rational(1, 1)};
  inv_mult = CRat(Rational(BigInt(1), multinomial(alpha)));
  return coefficient(alpha).scaled(inv_mult);
}

SymTensorField SymTensorField::from_tuple_components(
    int n, int l, const std::map<MultiIndex, Polynomial>& tuple_components_by_multiindex) {
  SymTensorField out(n, l);
  for (const auto& [alpha, psi] : tuple_components_by_multiindex)
    out.set_coefficient(alpha, psi.scaled(CRat(Rational(multinomial(alpha), BigInt(1)))));
  return out;
}

SymTensorField& SymTensorField::operator+=(const SymTensorField& o) {
  if (o.is_zero()) return *this;
  if (is_zero() && coeffs_.empty() && n_ == 0) {
    *this = o;
    return *this;
  }
  if (n_ != o.n_ || l_ != o.l_) throw ValidationError("tensor shape mismatch");
  for (const auto& [a, p] : o.coeffs_) add_coefficient(a, p);
  return *this;
}

SymTensorField SymTensorField::scaled(const CRat& c) const {
  SymTensorField out(n_, l_);
  if (c.is_zero()) return out;
  for (const auto& [a, p] : coeffs_) out.set_coefficient(a, p.scaled(c));
  return out;
}

bool operator==(const SymTensorField& a, const SymTensorField& b) {
  if (a.is_zero() && b.is_zero()) return true;
  return a.n_ == b.n_ && a.l_ == b.l_ && a.coeffs_ == b.coeffs_;
}

std::complex<double> pair_field(const SymTensorField& mu, const std::vector<double>& z,
                                const std::vector<double>& w) {
  std::complex<double> acc{0.0, 0.0};
  for (const auto& [alpha, p] : mu.coefficients()) {
    double mono = 1.0;
    for (size_t i = 0; i < alpha.size(); ++i)
      for (int q = 0; q < alpha[i]; ++q) mono *= w[i];
    if (mono != 0.0) acc += p.eval(z) * mono;
  }
  return acc;
}

CRat pair_field_exact(const SymTensorField& mu, const std::vector<Rational>& z,
                      const std::vector<Rational>& w) {
  CRat acc;
  for (const auto& [alpha, p] : mu.coefficients()) {
    Rational mono{1};
    for (size_t i = 0; i < alpha.size(); ++i)
      for (int q = 0; q < alpha[i]; ++q) mono *= w[i];
    if (mono != 0) acc += p.eval_exact(z) * CRat(mono);
  }
  return acc;
}

SymTensorField radial_contraction(const SymTensorField& mu) {
  const int l = mu.order();
  if (l < 1) throw ValidationError("radial contraction needs order >= 1");
  const int n = mu.dim();
  SymTensorField out(n, l - 1);
  // In multi-index components: b_beta = sum_j ((beta_j + 1)/l) z_j a_{beta + e_j}.
  for (const auto& [alpha, p] : mu.coefficients()) {
    for (int j = 0; j < n; ++j) {
      if (alpha[j] == 0) continue;
      MultiIndex beta = alpha;
      --beta[j];
      out.add_coefficient(beta,
                          p.multiplied_by_variable(j).scaled(CRat(Rational(beta[j] + 1, l))));
    }
  }
  return out;
}

namespace {

// Fixed deterministic probe set shared by every is_aradial call.
struct AradialProbes {
  std::vector<std::vector<double>> theta;
  std::vector<std::vector<double>> w;
};

const AradialProbes& aradial_probes(int n) {
  static std::map<int, AradialProbes> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  AradialProbes probes;
  SplitMix64 rng(0x5eed0000u + static_cast<std::uint64_t>(n));
  for (int i = 0; i < 200; ++i) {
    std::vector<double> t(n), w(n);
    double nt = 0.0, nw = 0.0;
    do {
      for (double& x : t) x = rng.normal();
      nt = norm(t);
    } while (nt < 1e-8);
    do {
      for (double& x : w) x = rng.normal();
      nw = norm(w);
    } while (nw < 1e-8);
    for (double& x : t) x /= nt;
    for (double& x : w) x /= nw;
    probes.theta.push_back(std::move(t));
    probes.w.push_back(std::move(w));
  }
  return cache.emplace(n, std::move(probes)).first->second;
}

}  // namespace

bool is_aradial(const SymTensorField& mu, double tol) {
  if (mu.order() == 0) return true;  // every zeroth order field is aradial
  SymTensorField contraction = radial_contraction(mu);
  const auto& probes = aradial_probes(mu.dim());
  for (size_t i = 0; i < probes.theta.size(); ++i) {
    std::complex<double> val = pair_field(contraction, probes.theta[i], probes.w[i]);
    if (std::abs(val) > tol) return false;
  }
  return true;
}

SymTensorField sym_derivative(const SymTensorField& eta) {
  const int n = eta.dim();
  const int l = eta.order() + 1;
  SymTensorField out(n, l);
  // a_beta = sum_i d_i a'_{beta - e_i}; equivalent to the tuple-component
  // formula psi_alpha = (1/l) sum_j d_{alpha_j} phi_{alpha~_j} after the
  // multinomial conversion.
  for (const auto& [alpha, p] : eta.coefficients()) {
    for (int i = 0; i < n; ++i) {
      Polynomial dp = p.derivative(i);
      if (dp.is_zero()) continue;
      MultiIndex beta = alpha;
      ++beta[i];
      out.add_coefficient(beta, dp);
    }
  }
  return out;
}

Polynomial exchange_residual(const SymTensorField& mu, const std::vector<int>& alpha,
                             const std::vector<int>& beta) {
  const int l = mu.order();
  if (static_cast<int>(alpha.size()) != l || static_cast<int>(beta.size()) != l)
    throw ValidationError("exchange tuples must have length l");
  Polynomial acc(mu.dim());
  // Exchanges swap alpha_i <-> beta_i on a subset of positions; sign is
  // (-1)^(number of swaps).
  for (std::uint32_t mask = 0; mask < (1u << l); ++mask) {
    std::vector<int> a = alpha, b = beta;
    int swaps = 0;
    for (int i = 0; i < l; ++i)
      if (mask & (1u << i)) {
        std::swap(a[i], b[i]);
        ++swaps;
      }
    Polynomial term = mu.tuple_component(a).derivative_tuple(b);
    acc += (swaps % 2 == 0) ? term : -term;
  }
  return acc;
}

SymTensorField multiply_poly(const Polynomial& p, const SymTensorField& mu) {
  SymTensorField out(mu.dim(), mu.order());
  if (p.is_zero()) return out;
  for (const auto& [alpha, q] : mu.coefficients()) out.set_coefficient(alpha, p * q);
  return out;
}

Parity parity(const SymTensorField& mu) {
  if (!mu.has_homogeneous_coefficients())
    throw ValidationError("parity requires homogeneous coefficients");
  int sign = -2;
  for (const auto& [alpha, p] : mu.coefficients()) {
    if (p.is_zero()) continue;
    int s = (p.degree() + mu.order()) % 2;
    if (sign == -2)
      sign = s;
    else if (sign != s)
      return Parity::mixed;
  }
  if (sign == -2) return Parity::even;  // zero field
  return sign == 0 ? Parity::even : Parity::odd;
}

std::vector<MultiIndex> enumerate_multiindices(int n, int order) {
  std::vector<MultiIndex> out;
  MultiIndex cur(n, 0);
  // Ascending lexicographic enumeration (binary searches rely on the order).
  std::function<void(int, int)> rec = [&](int slot, int remaining) {
    if (slot == n - 1) {
      cur[slot] = remaining;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      cur[slot] = v;
      rec(slot + 1, remaining - v);
    }
  };
  if (n >= 1 && order >= 0) rec(0, order);
  return out;
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw ValidationError("cannot convert non-finite double");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5, 1)
  // 53 doublings make the mantissa integral.
  long long scaled = static_cast<long long>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r(scaled);
  if (exp >= 0)
    r *= pow(Rational(2), exp);
  else
    r /= pow(Rational(2), -exp);
  return r;
}

namespace {

// Exact nullspace of the contraction map on the space of order-l tensors
// with homogeneous degree-d coefficients.  The constraint matrix is block
// diagonal over sigma = alpha + exponent (entrywise), so each block is
// eliminated independently with rational arithmetic.
std::vector<SymTensorField> aradial_basis_degree(int n, int l, int d) {
  std::vector<SymTensorField> basis;
  if (l == 0) {
    for (const auto& q : enumerate_multiindices(n, d)) {
      SymTensorField f(n, 0);
      f.set_coefficient(MultiIndex(n, 0), Polynomial::monomial(n, q, CRat(1)));
      basis.push_back(std::move(f));
    }
    return basis;
  }

  for (const auto& sigma : enumerate_multiindices(n, l + d)) {
    // Unknowns: (alpha, q = sigma - alpha) with |alpha| = l, alpha <= sigma.
    std::vector<MultiIndex> unknowns;
    for (const auto& alpha : enumerate_multiindices(n, l)) {
      bool ok = true;
      for (int i = 0; i < n; ++i)
        if (alpha[i] > sigma[i]) ok = false;
      if (ok) unknowns.push_back(alpha);
    }
    if (unknowns.empty()) continue;
    auto index_of = [&](const MultiIndex& alpha) -> int {
      auto it = std::lower_bound(unknowns.begin(), unknowns.end(), alpha);
      if (it == unknowns.end() || *it != alpha) return -1;
      return static_cast<int>(it - unknowns.begin());
    };

    // Rows: (beta, m = sigma - beta) with |beta| = l - 1; the coefficient of
    // monomial m in b_beta is sum_j ((beta_j + 1)/l) [a_{beta+e_j}]_{m-e_j}.
    std::vector<std::vector<Rational>> rows;
    for (const auto& beta : enumerate_multiindices(n, l - 1)) {
      bool ok = true;
      for (int i = 0; i < n; ++i)
        if (beta[i] > sigma[i]) ok = false;
      if (!ok) continue;
      std::vector<Rational> row(unknowns.size(), Rational(0));
      bool nonzero = false;
      for (int j = 0; j < n; ++j) {
        MultiIndex m = sigma;
        for (int i = 0; i < n; ++i) m[i] -= beta[i];
        if (m[j] == 0) continue;  // q = m - e_j must be valid
        MultiIndex alpha = beta;
        ++alpha[j];
        int col = index_of(alpha);
        if (col < 0) continue;
        row[col] += Rational(beta[j] + 1, l);
        nonzero = true;
      }
      if (nonzero) rows.push_back(std::move(row));
    }

    // RREF over the rationals.
    const int cols = static_cast<int>(unknowns.size());
    int rank = 0;
    std::vector<int> pivot_col;
    for (int c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
      int piv = -1;
      for (int r = rank; r < static_cast<int>(rows.size()); ++r)
        if (rows[r][c] != 0) {
          piv = r;
          break;
        }
      if (piv < 0) continue;
      std::swap(rows[rank], rows[piv]);
      Rational inv = Rational(1) / rows[rank][c];
      for (int cc = c; cc < cols; ++cc) rows[rank][cc] *= inv;
      for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
        if (r == rank || rows[r][c] == 0) continue;
        Rational f = rows[r][c];
        for (int cc = c; cc < cols; ++cc) rows[r][cc] -= f * rows[rank][cc];
      }
      pivot_col.push_back(c);
      ++rank;
    }

    // One basis vector per free column.
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivot_col) is_pivot[c] = true;
    for (int free = 0; free < cols; ++free) {
      if (is_pivot[free]) continue;
      std::vector<Rational> vec(cols, Rational(0));
      vec[free] = 1;
      for (int r = 0; r < rank; ++r) vec[pivot_col[r]] = -rows[r][free];
      // Clear denominators for tidy integer coefficients.
      BigInt lcm = 1;
      for (const auto& v : vec) {
        BigInt den = denominator(v);
        lcm = lcm / gcd(lcm, den) * den;
      }
      SymTensorField f(n, l);
      for (int c = 0; c < cols; ++c) {
        if (vec[c] == 0) continue;
        MultiIndex q = sigma;
        for (int i = 0; i < n; ++i) q[i] -= unknowns[c][i];
        f.add_coefficient(unknowns[c],
                          Polynomial::monomial(n, q, CRat(vec[c] * Rational(lcm, 1))));
      }
      basis.push_back(std::move(f));
    }
  }
  return basis;
}

/// Incremental exact row-echelon store for rank extension tests.
class RowSpace {
 public:
  /// Returns true when the vector enlarges the span (and keeps it).
  bool insert(std::vector<Rational> v) {
    for (const auto& [pivot, row] : rows_) {
      if (v[pivot] == 0) continue;
      Rational f = v[pivot];
      for (size_t i = pivot; i < v.size(); ++i) v[i] -= f * row[i];
    }
    size_t pivot = 0;
    while (pivot < v.size() && v[pivot] == 0) ++pivot;
    if (pivot == v.size()) return false;
    Rational inv = Rational(1) / v[pivot];
    for (size_t i = pivot; i < v.size(); ++i) v[i] *= inv;
    rows_.emplace(pivot, std::move(v));
    return true;
  }

 private:
  std::map<size_t, std::vector<Rational>> rows_;  // pivot column -> row
};

/// Coordinates of a degree-homogeneous field in the (alpha, exponent) grid.
std::vector<Rational> field_coordinates(const SymTensorField& f, int l, int d) {
  const int n = f.dim();
  auto alphas = enumerate_multiindices(n, l);
  auto monos = enumerate_multiindices(n, d);
  auto find = [](const std::vector<MultiIndex>& list, const MultiIndex& key) {
    return static_cast<size_t>(
        std::lower_bound(list.begin(), list.end(), key) - list.begin());
  };
  std::vector<Rational> coords(alphas.size() * monos.size(), Rational(0));
  for (const auto& [alpha, p] : f.coefficients()) {
    size_t ai = find(alphas, alpha);
    for (const auto& [e, c] : p.terms()) coords[ai * monos.size() + find(monos, e)] = c.re;
  }
  return coords;
}

}  // namespace

std::vector<SymTensorField> aradial_basis(int n, int l, int d_max) {
  if (n < 1 || l < 0 || d_max < 0) throw ValidationError("bad aradial basis request");
  // |z|^2 mu and mu restrict identically to the sphere, so the raw
  // polynomial-aradial spaces are overcomplete as sphere fields; each degree
  // keeps only the directions not reached by the |z|^2-lift of the space two
  // degrees down.  Exact rational elimination decides membership.
  Polynomial z2(n);
  for (int i = 0; i < n; ++i) {
    MultiIndex e(n, 0);
    e[i] = 2;
    z2.add_term(e, CRat(1));
  }
  std::vector<SymTensorField> basis;
  std::map<int, std::vector<SymTensorField>> raw;
  for (int d = 0; d <= d_max; ++d) {
    raw[d] = aradial_basis_degree(n, l, d);
    RowSpace seen;
    if (d >= 2)
      for (const auto& f : raw[d - 2]) seen.insert(field_coordinates(multiply_poly(z2, f), l, d));
    for (const auto& f : raw[d]) {
      if (seen.insert(field_coordinates(f, l, d))) basis.push_back(f);
    }
  }
  return basis;
}

CompiledField::CompiledField(const SymTensorField& mu) : n(mu.dim()), l(mu.order()) {
  for (const auto& [alpha, p] : mu.coefficients()) comps.emplace_back(alpha, CompiledPolynomial(p));
}

std::complex<double> CompiledField::pair(const std::vector<double>& z,
                                         const std::vector<double>& w) const {
  std::complex<double> acc{0.0, 0.0};
  for (const auto& [alpha, p] : comps) {
    double mono = 1.0;
    for (size_t i = 0; i < alpha.size(); ++i)
      for (int q = 0; q < alpha[i]; ++q) mono *= w[i];
    if (mono != 0.0) acc += p.eval(z) * mono;
  }
  return acc;
}

}  // namespace xscat
