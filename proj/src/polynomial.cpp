#include "xscat/polynomial.hpp"

#include <algorithm>
#include <numeric>

namespace xscat {

int mi_order(const MultiIndex& a) { return std::accumulate(a.begin(), a.end(), 0); }

bool mi_valid(const MultiIndex& a) {
  return std::all_of(a.begin(), a.end(), [](int e) { return e >= 0; });
}

BigInt multinomial(const MultiIndex& alpha) {
  BigInt result = 1;
  int seen = 0;
  for (int a : alpha) {
    for (int j = 1; j <= a; ++j) {
      ++seen;
      result = result * seen / j;  // binomial running product stays integral
    }
  }
  return result;
}

MultiIndex tuple_to_multiindex(const std::vector<int>& tuple, int n) {
  MultiIndex alpha(n, 0);
  for (int i : tuple) {
    if (i < 0 || i >= n) throw ValidationError("tuple entry out of range");
    ++alpha[i];
  }
  return alpha;
}

Polynomial::Polynomial(int n, const CRat& constant) : n_(n) {
  if (!constant.is_zero()) terms_[MultiIndex(n, 0)] = constant;
}

Polynomial Polynomial::monomial(int n, const MultiIndex& exponent, const CRat& coeff) {
  Polynomial p(n);
  p.add_term(exponent, coeff);
  return p;
}

Polynomial Polynomial::variable(int n, int i) {
  MultiIndex e(n, 0);
  e[i] = 1;
  return monomial(n, e, CRat(1));
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, mi_order(e));
  return d;
}

bool Polynomial::is_homogeneous() const {
  if (terms_.empty()) return true;
  int d = mi_order(terms_.begin()->first);
  for (const auto& [e, c] : terms_)
    if (mi_order(e) != d) return false;
  return true;
}

CRat Polynomial::coefficient(const MultiIndex& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? CRat() : it->second;
}

CRat Polynomial::constant_term() const { return coefficient(MultiIndex(n_, 0)); }

void Polynomial::add_term(const MultiIndex& exponent, const CRat& coeff) {
  if (static_cast<int>(exponent.size()) != n_ || !mi_valid(exponent))
    throw ValidationError("bad monomial exponent");
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(exponent, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (terms_.empty()) n_ = o.n_ ? o.n_ : n_;
  if (o.terms_.empty()) return *this;
  if (n_ != o.n_) throw ValidationError("polynomial dimension mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) { return *this += o.scaled(CRat(-1)); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.terms_.empty() || b.terms_.empty()) return Polynomial(a.n_ ? a.n_ : b.n_);
  if (a.n_ != b.n_) throw ValidationError("polynomial dimension mismatch");
  Polynomial out(a.n_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      MultiIndex e = ea;
      for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      out.add_term(e, ca * cb);
    }
  return out;
}

Polynomial Polynomial::operator-() const { return scaled(CRat(-1)); }

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.terms_.empty() && b.terms_.empty()) return true;
  return a.n_ == b.n_ && a.terms_ == b.terms_;
}

Polynomial Polynomial::scaled(const CRat& c) const {
  Polynomial out(n_);
  if (c.is_zero()) return out;
  for (const auto& [e, v] : terms_) out.terms_[e] = v * c;
  return out;
}

Polynomial Polynomial::derivative(int i) const {
  Polynomial out(n_);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    MultiIndex d = e;
    --d[i];
    out.add_term(d, c * CRat(Rational(e[i])));
  }
  return out;
}

Polynomial Polynomial::derivative_tuple(const std::vector<int>& tuple) const {
  Polynomial out = *this;
  for (int i : tuple) out = out.derivative(i);
  return out;
}

Polynomial Polynomial::multiplied_by_variable(int i) const {
  Polynomial out(n_);
  for (const auto& [e, c] : terms_) {
    MultiIndex m = e;
    ++m[i];
    out.add_term(m, c);
  }
  return out;
}

std::complex<double> Polynomial::eval(const std::vector<double>& z) const {
  std::complex<double> acc{0.0, 0.0};
  for (const auto& [e, c] : terms_) {
    double mono = 1.0;
    for (size_t i = 0; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) mono *= z[i];
    acc += c.to_complex() * mono;
  }
  return acc;
}

CRat Polynomial::eval_exact(const std::vector<Rational>& z) const {
  CRat acc;
  for (const auto& [e, c] : terms_) {
    Rational mono{1};
    for (size_t i = 0; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) mono *= z[i];
    acc += c * CRat(mono);
  }
  return acc;
}

CompiledPolynomial::CompiledPolynomial(const Polynomial& p) {
  terms.reserve(p.terms().size());
  for (const auto& [e, c] : p.terms()) terms.emplace_back(e, c.to_complex());
}

std::complex<double> CompiledPolynomial::eval(const std::vector<double>& z) const {
  std::complex<double> acc{0.0, 0.0};
  for (const auto& [e, c] : terms) {
    double mono = 1.0;
    for (size_t i = 0; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) mono *= z[i];
    acc += c * mono;
  }
  return acc;
}

}  // namespace xscat
