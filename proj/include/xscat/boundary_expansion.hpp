#ifndef XSCAT_BOUNDARY_EXPANSION_HPP
#define XSCAT_BOUNDARY_EXPANSION_HPP

// Exact symbolic engine for radial-model boundary expansions near x = 0
// (x = 1/r): series e^{phase} x^{base} sum_beta c_beta x^beta acted on by
// powers of the radial Laplacian Delta = -d_r^2 - ((n-1)/r) d_r (positive
// convention).  All coefficients are exact complex rationals.
//
// Phase/sign convention, fixed throughout: the oscillatory_minus phase is
// e^{-i lambda / x} = e^{-i lambda r}, and with the positive Laplacian this
// makes the order-extraction constants C_alpha = -2 i alpha.  The sign of
// C_alpha flips with the phase.

#include <complex>
#include <map>
#include <vector>

#include "xscat/rational.hpp"
#include "xscat/errors.hpp"

namespace xscat {

enum class RadialPhase { oscillatory_minus, oscillatory_plus, exponential, none };

struct RadialSeries {
  RadialPhase phase = RadialPhase::none;
  int n = 0;           // ambient dimension; 0 for plain power series
  Rational base{0};    // exponent of the leading power of x
  std::map<int, CRat> terms;  // offset beta -> exact coefficient
  int truncation = 0;  // terms beyond this offset are not represented

  /// Series with base exponent (n-1)/2 and the given phase.
  static RadialSeries phased(RadialPhase phase, int n, int truncation);

  void add_term(int beta, const CRat& c);
  CRat term(int beta) const;
  bool is_zero() const;
  /// Smallest offset carrying a nonzero coefficient (-1 when zero).
  int lowest_offset() const;
  RadialSeries truncated(int new_truncation) const;

  /// sum c_beta x^beta (no phase, no x^base factor).
  std::complex<double> bracket_eval(double x) const;
  /// Full value including the phase factor and x^base.
  std::complex<double> eval(double x) const;

  friend RadialSeries operator-(const RadialSeries& a, const RadialSeries& b);
  friend bool operator==(const RadialSeries& a, const RadialSeries& b);
};

/// Delta^k - mu^k where mu is the phase eigenvalue of Delta on the series
/// phase (lambda^2 for oscillatory phases, -tau^2 for the exponential one);
/// for oscillatory series this is Delta^k - lambda^{2k}, and with k = 2j,
/// spectral = tau on an exponential series it is Delta^{2j} - tau^{4j}.
struct RadialOperator {
  int n = 3;
  int k = 1;
  Rational spectral{1};  // lambda or tau, nonzero
};

/// One application of the radial Laplacian (exact, term by term); the
/// spectral parameter enters through the phase derivative.
RadialSeries apply_laplacian(const RadialSeries& series, int n, const Rational& spectral);

/// (Delta^k - mu^k + V) series, where the optional potential V is a sum of
/// x^m multiplications, m >= 2 (used to verify that the extraction constants
/// are potential-independent).  The result carries every exactly-computed
/// term; its truncation marker equals the input's.
RadialSeries apply_operator(const RadialOperator& op, const RadialSeries& series,
                            const std::vector<std::pair<int, Rational>>& potential = {});

/// Extraction constant C_alpha: the coefficient of x^{(n+1)/2 + alpha} in
/// (Delta^k - lambda^{2k}) e^{-i lambda/x} x^{(n-1)/2 + alpha}, divided by
/// k lambda^{2k-1}.  C_0 = 0 exactly; C_alpha = -2 i alpha otherwise.
CRat c_alpha(int n, int k, const Rational& lambda, int alpha);

/// Difference between (Delta^k - lambda^{2k}) series and the factored routes
/// Q (Delta - lambda^2) series and (Delta - lambda^2) Q series, with
/// Q = sum_{j=0}^{k-1} lambda^{2j} Delta^{k-j-1}; identically zero.
RadialSeries q_factorization_check(int n, int k, const Rational& lambda,
                                   const RadialSeries& series);

/// Formal solution u = e^{-i lambda/x} x^{(n-1)/2} (f_lead + sum c_beta x^beta)
/// with apply_operator(u) vanishing in every term below x^{(n-1)/2 + N + 2}.
RadialSeries formal_solution(int n, int k, const Rational& lambda, const CRat& f_lead, int N);

struct EigenPotentialResult {
  RadialSeries u;          // e^{-tau/x} x^{(n-1)/2}(1 + ...), truncation N
  RadialSeries potential;  // V_N = -g_N / u_N as a truncated power series
  RadialSeries residual;   // g_N = (Delta^{2j} - tau^{4j}) u_N, exact
  Rational residual_order; // (n-1)/2 + N + 2
};

/// Embedded-eigenvalue construction for Delta^{2j} + V at energy tau^{4j}:
/// solves the exponential-phase recursion to order N, forms the exact
/// residual g_N and the series quotient V_N = -g_N / u_N (computed a fixed
/// number of terms past its leading order).  Reports an error if the
/// truncated bracket of u_N fails to stay positive on (0, 0.2].
EigenPotentialResult eigen_potential(int n, int j, const Rational& tau, int N);

/// True when the bracket of the series is positive at `samples` points of
/// (0, x_max] (the domain check used by eigen_potential).
bool bracket_positive_on(const RadialSeries& series, double x_max, int samples);

}  // namespace xscat

#endif
