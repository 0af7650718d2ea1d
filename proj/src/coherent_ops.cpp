#include "qrabi/coherent_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qrabi/special_functions.hpp"

namespace qrabi::coherent {
namespace {

constexpr double kSeriesThreshold = 1e-6;
constexpr int kMaxFactorialIndex = 170;

void check_indices(int n, int m) {
  if (n < 0 || m < 0) throw std::out_of_range("matrix element index must be >= 0");
  if (std::max(n, m) > kMaxFactorialIndex) {
    throw std::range_error("matrix element index beyond factorial range");
  }
}

// c^p for integer p >= 0 with c^0 = 1 even when c = 0.
cplx ipow(cplx c, int p) {
  cplx r(1.0, 0.0);
  for (int i = 0; i < p; ++i) r *= c;
  return r;
}

// (-conj(kappa))^{m-n} for n <= m, kappa^{n-m} otherwise.
cplx branch_power(cplx kappa, int n, int m) {
  return n <= m ? ipow(-std::conj(kappa), m - n) : ipow(kappa, n - m);
}

}  // namespace

cplx kappa_map(const AlgebraSpec& algebra, cplx z) {
  algebra.validate();
  const double a = std::abs(z);
  switch (algebra.kind) {
    case AlgebraSpec::Kind::Oscillator:
      return z;
    case AlgebraSpec::Kind::SU11: {
      const double ratio = a < kSeriesThreshold ? 1.0 + a * a / 6.0 : std::sinh(a) / a;
      return ratio * z;
    }
    case AlgebraSpec::Kind::SU2: {
      const double ratio = a < kSeriesThreshold ? 1.0 - a * a / 6.0 : std::sin(a) / a;
      return ratio * z;
    }
  }
  return z;
}

CoherentParameter make_parameter(const AlgebraSpec& algebra, cplx z) {
  return {z, kappa_map(algebra, z), algebra};
}

cplx matelem_u(int n, int m, cplx z) {
  check_indices(n, m);
  if (z == cplx(0.0, 0.0)) return n == m ? 1.0 : 0.0;
  const int lo = std::min(n, m);
  const int gap = std::abs(n - m);
  const double x = std::norm(z);
  const double log_scale = -0.5 * x + 0.5 * (special::log_factorial(lo) - special::log_factorial(lo + gap));
  return std::exp(log_scale) * branch_power(z, n, m) * special::laguerre_assoc(lo, gap, x);
}

cplx matelem_v(double K, int n, int m, cplx z) {
  if (!(K > 0.0)) throw std::domain_error("matelem_v: K must be positive");
  check_indices(n, m);
  if (z == cplx(0.0, 0.0)) return n == m ? 1.0 : 0.0;
  const cplx kappa = kappa_map(AlgebraSpec::su11(K), z);
  const double x = std::norm(kappa);
  const int lo = std::min(n, m);
  const int gap = std::abs(n - m);
  const double log_scale =
      0.5 * (special::log_factorial(n) + special::log_factorial(m) - special::log_pochhammer(2.0 * K, n) -
             special::log_pochhammer(2.0 * K, m)) +
      (-K - 0.5 * (n + m)) * std::log1p(x);
  return std::exp(log_scale) * branch_power(kappa, n, m) * special::f_su11(lo, gap, x, 2.0 * K);
}

cplx matelem_w(int twoJ, int n, int m, cplx z) {
  if (twoJ < 1) throw std::domain_error("matelem_w: 2J must be >= 1");
  if (n < 0 || m < 0 || n > twoJ || m > twoJ) {
    throw std::out_of_range("matelem_w: index exceeds 2J");
  }
  if (z == cplx(0.0, 0.0)) return n == m ? 1.0 : 0.0;
  const cplx kappa = kappa_map(AlgebraSpec::su2(twoJ), z);
  const double x = std::min(1.0, std::norm(kappa));
  const int lo = std::min(n, m);
  const int gap = std::abs(n - m);
  const double log_perm_n = special::log_factorial(twoJ) - special::log_factorial(twoJ - n);
  const double log_perm_m = special::log_factorial(twoJ) - special::log_factorial(twoJ - m);
  const double scale =
      std::exp(0.5 * (special::log_factorial(n) + special::log_factorial(m) - log_perm_n - log_perm_m));
  const double power = 0.5 * twoJ - 0.5 * (n + m);
  // the weight is (cos^2 |z|)^power; past |z| = pi/2 the odd powers of cos |z| turn negative
  const double sign = std::cos(std::abs(z)) < 0.0 && (twoJ - n - m) % 2 != 0 ? -1.0 : 1.0;
  return sign * scale * branch_power(kappa, n, m) * special::f_su2_weighted(lo, gap, x, twoJ, power);
}

cplx matelem(const AlgebraSpec& algebra, int n, int m, cplx z) {
  switch (algebra.kind) {
    case AlgebraSpec::Kind::Oscillator:
      return matelem_u(n, m, z);
    case AlgebraSpec::Kind::SU11:
      return matelem_v(algebra.bargmann_K, n, m, z);
    case AlgebraSpec::Kind::SU2:
      return matelem_w(algebra.spin_2J, n, m, z);
  }
  throw std::invalid_argument("matelem: unknown algebra");
}

double closed_form_deviation(const AlgebraSpec& algebra, cplx z, int max_index, const CMatrix& numeric) {
  const int top = std::min<int>(max_index, static_cast<int>(numeric.rows()) - 1);
  double worst = 0.0;
  for (int n = 0; n <= top; ++n) {
    for (int m = 0; m <= top; ++m) {
      worst = std::max(worst, std::abs(matelem(algebra, n, m, z) - numeric(n, m)));
    }
  }
  return worst;
}

OracleReport oracle_check(const AlgebraSpec& algebra, cplx z, int max_index, int dim) {
  algebra.validate();
  OracleReport rep;
  if (!algebra.truncated()) {
    dim = algebra.spin_2J + 1;
    max_index = std::min(max_index, algebra.spin_2J);
  } else if (dim <= max_index) {
    throw std::invalid_argument("oracle_check: dim must exceed max_index");
  }
  rep.dim = dim;
  rep.max_index = max_index;
  rep.max_deviation = closed_form_deviation(algebra, z, max_index, displacement_numeric(algebra, dim, z));
  if (!algebra.truncated()) {
    rep.doubled_deviation = rep.max_deviation;
    rep.converged = true;
    rep.message = "finite representation";
    return rep;
  }
  rep.doubled_deviation =
      closed_form_deviation(algebra, z, max_index, displacement_numeric(algebra, 2 * dim, z));
  const double moved = std::abs(rep.doubled_deviation - rep.max_deviation);
  rep.converged = !(moved > 0.1 * rep.max_deviation && moved > 1e-12);
  rep.message = rep.converged ? "converged" : "deviation moved by more than 10% on doubling dim";
  return rep;
}

}  // namespace qrabi::coherent
