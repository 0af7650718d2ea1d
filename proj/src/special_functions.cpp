#include "qrabi/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qrabi::special {
namespace {

constexpr double kOverflow = 1e300;

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double term) {
    const double t = sum_ + term;
    if (std::abs(sum_) >= std::abs(term)) {
      comp_ += (sum_ - t) + term;
    } else {
      comp_ += (term - t) + sum_;
    }
    sum_ = t;
    ++count_;
    max_abs_ = std::max(max_abs_, std::abs(term));
  }

  PolyEvalReport report() const { return {sum_ + comp_, count_, max_abs_}; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  int count_ = 0;
  double max_abs_ = 0.0;
};

void check_term(long double term, const char* who) {
  if (!std::isfinite(static_cast<double>(term)) || std::abs(term) > kOverflow) {
    throw std::range_error(std::string(who) + ": intermediate exceeds overflow threshold");
  }
}

// C(top, k) for integer top >= 0, multiplicative form.
long double binomial(int top, int k) {
  if (k < 0 || k > top) return 0.0L;
  if (k > top - k) k = top - k;
  long double c = 1.0L;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<long double>(top - k + i) / static_cast<long double>(i);
  }
  return c;
}

long double inverse_factorial(int n) {
  long double f = 1.0L;
  for (int i = 2; i <= n; ++i) f /= static_cast<long double>(i);
  return f;
}

long double ipow(long double base, int e) {
  long double r = 1.0L;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// (2J)! / ((2J-m-n+j)! (m-j)! (n-j)! j!); (2J)!/(2J-m-n+j)! is a falling
// product of length m+n-j.
long double su2_coefficient(int m, int n, int j, int twoJ) {
  long double coeff = 1.0L;
  const int len = m + n - j;
  for (int i = 0; i < len; ++i) {
    coeff *= static_cast<long double>(twoJ - i);
    if (i < m - j) coeff /= static_cast<long double>(i + 1);
    if (i < n - j) coeff /= static_cast<long double>(i + 1);
    if (i < j) coeff /= static_cast<long double>(i + 1);
  }
  return coeff;
}

}  // namespace

PolyEvalReport laguerre_assoc_report(int k, int alpha, double x) {
  if (k < 0) throw std::domain_error("laguerre_assoc: negative degree");
  if (alpha < -k) throw std::domain_error("laguerre_assoc: alpha < -k");
  if (!std::isfinite(x)) throw std::domain_error("laguerre_assoc: non-finite argument");

  CompensatedSum acc;
  const int top = k + alpha;
  for (int j = 0; j <= k; ++j) {
    long double term = binomial(top, k - j) * ipow(x, j) * inverse_factorial(j);
    if (j % 2 == 1) term = -term;
    check_term(term, "laguerre_assoc");
    acc.add(static_cast<double>(term));
  }
  PolyEvalReport rep = acc.report();
  // the explicit sum cancels badly once x is a few units; the upward recurrence does not
  if (k > 0) {
    long double prev = 1.0L;
    long double cur = 1.0L + alpha - x;
    for (int i = 1; i < k; ++i) {
      const long double next = ((2.0L * i + 1 + alpha - x) * cur - (static_cast<long double>(i) + alpha) * prev) / (i + 1);
      prev = cur;
      cur = next;
    }
    check_term(cur, "laguerre_assoc");
    rep.value = static_cast<double>(cur);
  }
  return rep;
}

double laguerre_assoc(int k, int alpha, double x) { return laguerre_assoc_report(k, alpha, x).value; }

double pochhammer(double a, int n) {
  if (n < 0) throw std::domain_error("pochhammer: negative length");
  double p = 1.0;
  for (int i = 0; i < n; ++i) p *= (a + i);
  return p;
}

double falling_perm(int twoJ, int n) {
  if (twoJ < 0 || n < 0 || n > twoJ) throw std::domain_error("falling_perm: need 0 <= n <= 2J");
  double p = 1.0;
  for (int i = 0; i < n; ++i) p *= static_cast<double>(twoJ - i);
  return p;
}

PolyEvalReport f_su11_report(int m, int d, double x, double twoK) {
  if (m < 0 || d < 0) throw std::domain_error("f_su11: negative index");
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("f_su11: x must be finite and >= 0");
  if (!(twoK > 0.0)) throw std::domain_error("f_su11: 2K must be positive");

  const int n = m + d;
  CompensatedSum acc;
  for (int j = 0; j <= m; ++j) {
    // (2K)_{m+n-j} / ((m-j)! (n-j)! j!), interleaving products and quotients
    long double coeff = 1.0L;
    const int len = m + n - j;
    for (int i = 0; i < len; ++i) {
      coeff *= static_cast<long double>(twoK) + i;
      if (i < m - j) coeff /= static_cast<long double>(i + 1);
      if (i < n - j) coeff /= static_cast<long double>(i + 1);
      if (i < j) coeff /= static_cast<long double>(i + 1);
    }
    long double term = coeff * ipow(1.0L + x, j) * ipow(x, m - j);
    if ((m - j) % 2 == 1) term = -term;
    check_term(term, "f_su11");
    acc.add(static_cast<double>(term));
  }
  return acc.report();
}

double f_su11(int m, int d, double x, double twoK) { return f_su11_report(m, d, x, twoK).value; }

PolyEvalReport f_su2_report(int m, int d, double x, int twoJ) {
  if (m < 0 || d < 0) throw std::domain_error("f_su2: negative index");
  if (twoJ < 1) throw std::domain_error("f_su2: 2J must be a positive integer");
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("f_su2: x outside [0, 1]");

  const int n = m + d;
  CompensatedSum acc;
  for (int j = 0; j <= m; ++j) {
    const int rest = twoJ - m - n + j;
    if (rest < 0) continue;
    const long double coeff = su2_coefficient(m, n, j, twoJ);
    long double term = coeff * ipow(1.0L - x, j) * ipow(x, m - j);
    if ((m - j) % 2 == 1) term = -term;
    check_term(term, "f_su2");
    acc.add(static_cast<double>(term));
  }
  PolyEvalReport r = acc.report();
  // every term excluded by the starred rule: the sum is empty
  if (r.terms_summed == 0) r.terms_summed = 1;
  return r;
}

double f_su2(int m, int d, double x, int twoJ) { return f_su2_report(m, d, x, twoJ).value; }

double f_su2_weighted(int m, int d, double x, int twoJ, double power) {
  const double gap = 1.0 - x;
  if (gap > 1e-6) return std::pow(gap, power) * f_su2(m, d, x, twoJ);
  f_su2_report(0, 0, x, twoJ);  // domain checks only

  const int n = m + d;
  CompensatedSum acc;
  for (int j = 0; j <= m; ++j) {
    const int rest = twoJ - m - n + j;
    if (rest < 0) continue;
    const long double coeff = su2_coefficient(m, n, j, twoJ);
    long double term = coeff * std::pow(static_cast<long double>(gap), power + j) * ipow(x, m - j);
    if ((m - j) % 2 == 1) term = -term;
    check_term(term, "f_su2_weighted");
    acc.add(static_cast<double>(term));
  }
  return acc.report().value;
}

double log_factorial(int n) {
  if (n < 0) throw std::domain_error("log_factorial: negative argument");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_pochhammer(double a, int n) {
  if (!(a > 0.0)) throw std::domain_error("log_pochhammer: a must be positive");
  if (n < 0) throw std::domain_error("log_pochhammer: negative length");
  if (n < 64) return std::log(pochhammer(a, n));
  return std::lgamma(a + n) - std::lgamma(a);
}

}  // namespace qrabi::special
