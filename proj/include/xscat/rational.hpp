#ifndef XSCAT_RATIONAL_HPP
#define XSCAT_RATIONAL_HPP

// Exact rational and complex-rational scalars.  All symbolic identities in
// the library (symmetrized-derivative kernels, exchange sums, boundary
// expansion constants) are required to hold exactly, so polynomial and
// series coefficients are kept rational until quadrature time.

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <string>

namespace xscat {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

/// num/den with sign normalization (cpp_rational rejects negative
/// denominators in its two-argument constructor).
inline Rational make_rational(long long num, long long den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rational(num, den);
}

/// Complex number with exact rational real and imaginary parts.
struct CRat {
  Rational re{0};
  Rational im{0};

  CRat() = default;
  CRat(Rational r) : re(std::move(r)) {}
  CRat(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  CRat(long r) : re(r) {}
  CRat(long num, long den) : re(make_rational(num, den)) {}

  static CRat i() { return CRat(Rational(0), Rational(1)); }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  CRat conj() const { return CRat(re, -im); }
  Rational norm2() const { return re * re + im * im; }

  std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }

  CRat& operator+=(const CRat& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  CRat& operator-=(const CRat& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  CRat& operator*=(const CRat& o) {
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  CRat& operator/=(const CRat& o) {
    Rational n = o.norm2();
    Rational r = (re * o.re + im * o.im) / n;
    Rational i = (im * o.re - re * o.im) / n;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }

  friend CRat operator+(CRat a, const CRat& b) { return a += b; }
  friend CRat operator-(CRat a, const CRat& b) { return a -= b; }
  friend CRat operator*(CRat a, const CRat& b) { return a *= b; }
  friend CRat operator/(CRat a, const CRat& b) { return a /= b; }
  friend CRat operator-(const CRat& a) { return CRat(-a.re, -a.im); }
  friend bool operator==(const CRat& a, const CRat& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const CRat& a, const CRat& b) { return !(a == b); }
};

inline CRat pow(const CRat& base, int e) {
  CRat acc{Rational(1)};
  CRat b = base;
  int n = e;
  if (n < 0) {
    b = CRat{Rational(1)} / b;
    n = -n;
  }
  while (n > 0) {
    if (n & 1) acc *= b;
    b *= b;
    n >>= 1;
  }
  return acc;
}

inline Rational pow(const Rational& base, int e) {
  Rational acc{1};
  Rational b = base;
  int n = e;
  if (n < 0) {
    b = Rational(1) / b;
    n = -n;
  }
  while (n > 0) {
    if (n & 1) acc *= b;
    b *= b;
    n >>= 1;
  }
  return acc;
}

inline std::string to_string(const Rational& r) { return r.str(); }

inline std::string to_string(const CRat& c) {
  if (c.im == 0) return c.re.str();
  return c.re.str() + (c.im < 0 ? "" : "+") + c.im.str() + "i";
}

}  // namespace xscat

#endif
