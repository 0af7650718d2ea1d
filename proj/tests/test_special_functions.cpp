#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qrabi/special_functions.hpp"

using namespace qrabi::special;

TEST_CASE("laguerre: known values") {
  CHECK(laguerre_assoc(0, 5, 3.7) == 1.0);
  CHECK(laguerre_assoc(1, 0, 2.0) == doctest::Approx(-1.0).epsilon(1e-15));
  // 269/48 from exact rational summation
  CHECK(laguerre_assoc(3, 2, 0.5) == doctest::Approx(269.0 / 48.0).epsilon(1e-14));
  CHECK_THROWS_AS(laguerre_assoc(-1, 0, 1.0), std::domain_error);
}

TEST_CASE("laguerre: value at origin with alpha = 0 is 1") {
  for (int k = 0; k <= 40; ++k) CHECK(laguerre_assoc(k, 0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("laguerre: large arguments where the explicit sum cancels") {
  // 40-digit reference values
  CHECK(laguerre_assoc(30, 10, 10.0) == doctest::Approx(-11103.800788399949655).epsilon(1e-13));
  CHECK(laguerre_assoc(25, 3, 7.5) == doctest::Approx(-31.271252872914444844).epsilon(1e-12));
  CHECK(laguerre_assoc(20, 0, 9.375) == doctest::Approx(5.0664531926500339638).epsilon(1e-12));
  CHECK(laguerre_assoc(29, 7, 3.125) == doctest::Approx(-3254.2848601530853667).epsilon(1e-13));
}

TEST_CASE("laguerre: three-term recurrence") {
  double worst = 0.0;
  for (int alpha = 0; alpha <= 10; ++alpha) {
    for (double x = 0.0; x <= 10.0; x += 0.625) {
      for (int k = 1; k <= 29; ++k) {
        const double lhs = (k + 1) * laguerre_assoc(k + 1, alpha, x);
        const double rhs = (2 * k + 1 + alpha - x) * laguerre_assoc(k, alpha, x) - (k + alpha) * laguerre_assoc(k - 1, alpha, x);
        // relative to the largest term so cancellation near roots does not blow up the ratio
        const double scale = std::max({std::abs(lhs), std::abs((2 * k + 1 + alpha - x) * laguerre_assoc(k, alpha, x)), 1.0});
        worst = std::max(worst, std::abs(lhs - rhs) / scale);
      }
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("laguerre: report fields") {
  const PolyEvalReport r = laguerre_assoc_report(6, 1, 4.0);
  CHECK(r.terms_summed >= 1);
  CHECK(r.max_term_magnitude >= 0.0);
  CHECK(r.value == laguerre_assoc(6, 1, 4.0));
}

TEST_CASE("pochhammer") {
  CHECK(pochhammer(0.5, 0) == 1.0);
  CHECK(pochhammer(0.5, 2) == 0.75);
  CHECK(pochhammer(1.0, 5) == 120.0);
  for (double a : {0.25, 0.75, 1.5, 3.0}) {
    for (int n = 0; n < 30; ++n) CHECK(pochhammer(a, n + 1) == pochhammer(a, n) * (a + n));
  }
}

TEST_CASE("falling permutation") {
  CHECK(falling_perm(4, 0) == 1.0);
  CHECK(falling_perm(4, 2) == 12.0);
  CHECK(falling_perm(1, 1) == 1.0);
  CHECK_THROWS_AS(falling_perm(2, 3), std::domain_error);
}

TEST_CASE("f_su11") {
  CHECK(f_su11(0, 3, 0.2, 1.5) == doctest::Approx(1.5 * 2.5 * 3.5 / 6.0).epsilon(1e-15));
  CHECK(f_su11(0, 0, 7.3, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  // 40-digit gamma-function summation
  CHECK(f_su11(2, 1, 0.3, 0.5) == doctest::Approx(0.526171875).epsilon(1e-14));
  CHECK(f_su11(4, 2, 1.7, 1.5) == doctest::Approx(89.403389545440673828).epsilon(1e-13));
  CHECK_THROWS_AS(f_su11(1, 0, -0.1, 1.0), std::domain_error);
  CHECK_THROWS_AS(f_su11(1, 0, 0.1, 0.0), std::domain_error);
}

TEST_CASE("f_su2") {
  CHECK(f_su2(0, 0, 0.4, 3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f_su2(1, 0, 0.0, 2) == doctest::Approx(2.0).epsilon(1e-15));
  // every term excluded by the 2J - m - n + j >= 0 rule
  CHECK(f_su2(1, 2, 0.25, 2) == 0.0);
  CHECK(f_su2_report(1, 2, 0.25, 2).terms_summed >= 1);
  // exact rationals: 3, 108/25, -70/3
  CHECK(f_su2(2, 1, 0.3, 5) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(f_su2(3, 2, 0.4, 6) == doctest::Approx(108.0 / 25.0).epsilon(1e-14));
  CHECK(f_su2(2, 1, 1.0 / 3.0, 7) == doctest::Approx(-70.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(f_su2(1, 0, 1.5, 2), std::domain_error);
}

TEST_CASE("f_su2 weighted form matches the plain product") {
  for (int twoJ = 1; twoJ <= 8; ++twoJ) {
    for (int m = 0; m <= twoJ; ++m) {
      for (int d = 0; m + d <= twoJ; ++d) {
        for (double x : {0.0, 0.2, 0.5, 0.9}) {
          const double power = 0.5 * twoJ - m - 0.5 * d;
          const double plain = std::pow(1.0 - x, power) * f_su2(m, d, x, twoJ);
          CHECK(f_su2_weighted(m, d, x, twoJ, power) == doctest::Approx(plain).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("both F families reduce to 1 at m = d = 0") {
  for (double x : {0.0, 0.3, 0.99}) {
    CHECK(f_su2(0, 0, x, 4) == doctest::Approx(1.0));
    CHECK(f_su11(0, 0, x, 0.5) == doctest::Approx(1.0));
  }
}

TEST_CASE("determinism: identical inputs give identical bits") {
  CHECK(laguerre_assoc(17, 3, 5.5) == laguerre_assoc(17, 3, 5.5));
  CHECK(f_su11(7, 2, 0.8, 1.5) == f_su11(7, 2, 0.8, 1.5));
  CHECK(f_su2(3, 1, 0.35, 9) == f_su2(3, 1, 0.35, 9));
}

TEST_CASE("overflow is reported as a range error") {
  CHECK_THROWS_AS(f_su11(150, 150, 1e10, 1.0), std::range_error);
}
