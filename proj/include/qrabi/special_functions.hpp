#pragma once

// Scalar special functions used by the closed-form coherent-operator matrix
// elements: associated Laguerre polynomials, Pochhammer symbols, falling
// factorials and the two finite F-sums attached to su(1,1) and su(2).
//
// All sums run from j = 0 upward with Neumaier compensation. Coefficients
// are built multiplicatively in long double so that no factorial or Gamma
// value is ever formed on its own.

#include <cstddef>

namespace qrabi::special {

/// Result of a finite-sum evaluation together with cancellation diagnostics.
struct PolyEvalReport {
  double value = 0.0;
  int terms_summed = 0;
  double max_term_magnitude = 0.0;
};

/// L_k^{(alpha)}(x) = sum_j (-1)^j C(k+alpha, k-j) x^j / j!. The value comes from
/// the three-term recurrence; the report's term statistics describe the sum.
/// Throws std::domain_error for k < 0, alpha < -k or non-finite x,
/// std::range_error if a term overflows.
PolyEvalReport laguerre_assoc_report(int k, int alpha, double x);
double laguerre_assoc(int k, int alpha, double x);

/// (a)_n = a (a+1) ... (a+n-1); 1 for n = 0.
double pochhammer(double a, int n);

/// (2J)! / (2J-n)!. Throws std::domain_error unless 0 <= n <= twoJ.
double falling_perm(int twoJ, int n);

/// F_m^{(d)}(x : 2K) with n = m + d:
///   sum_{j=0}^{m} (-1)^{m-j} (2K)_{m+n-j} / ((m-j)! (n-j)! j!) (1+x)^j x^{m-j}
PolyEvalReport f_su11_report(int m, int d, double x, double twoK);
double f_su11(int m, int d, double x, double twoK);

/// F_m^{(d)}(x : 2J) with n = m + d, restricted to j with 2J - m - n + j >= 0:
///   sum*_{j=0}^{m} (-1)^{m-j} (2J)! / ((2J-m-n+j)! (m-j)! (n-j)! j!) (1-x)^j x^{m-j}
PolyEvalReport f_su2_report(int m, int d, double x, int twoJ);
double f_su2(int m, int d, double x, int twoJ);

/// (1-x)^power * F_m^{(d)}(x : 2J). When x is close to 1 the weight is folded
/// into each admitted term, which keeps the product finite at x = 1 whenever
/// power + j >= 0 for every admitted j.
double f_su2_weighted(int m, int d, double x, int twoJ, double power);

/// log(n!) via lgamma; n >= 0.
double log_factorial(int n);

/// log((a)_n) for a > 0.
double log_pochhammer(double a, int n);

}  // namespace qrabi::special
