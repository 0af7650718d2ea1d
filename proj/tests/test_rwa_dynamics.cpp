#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qrabi/coherent_ops.hpp"
#include "qrabi/rwa_dynamics.hpp"

using namespace qrabi;
using namespace qrabi::model;
using namespace qrabi::rwa;

namespace {

ModelConfig make(int n, AlgebraSpec alg, double g, double dabs, double phase = 0.0, int dim = 96) {
  ModelConfig c;
  c.n = n;
  c.algebra = alg;
  c.g = g;
  c.delta_abs = dabs;
  c.delta_phase = phase;
  c.trunc_dim = dim;
  return c;
}

// R from its defining k-sum with dense-exponential matrix elements
cplx rabi_ksum(const ModelConfig& c, int m, int r, int j, int jp) {
  const DressedConstants d = dressed_constants(c);
  const int n = c.n;
  const int dim = c.field_dim();
  cplx sp = 0.0, sm = 0.0;
  for (int k = 0; k < n; ++k) {
    const cplx w = 0.5 * d.C * (sigma_power(n, k) - sigma_power(n, k - 1));
    sp += displacement_numeric(c.algebra, dim, w)(r, m) * sigma_power(n, static_cast<long long>(k) * (jp - j));
    sm += displacement_numeric(c.algebra, dim, -w)(r, m) * sigma_power(n, static_cast<long long>(k) * (jp - j));
  }
  return (c.delta() * sigma_power(n, j) * sp + std::conj(c.delta()) * sigma_power(n, -jp) * sm) / static_cast<double>(n);
}

}  // namespace

TEST_CASE("theta") {
  CHECK(theta(make(3, AlgebraSpec::su2(2), 0.3, 0.0), 1, 2) == 0.0);
  // two-level oscillator: kappa = i 2g/omega
  const ModelConfig o = make(2, AlgebraSpec::oscillator(), 0.2, 0.01);
  for (int m = 0; m < 5; ++m) {
    const double x = 0.16;
    double lag = 0.0;  // L_m(x) from the explicit sum
    double fact = 1.0;
    for (int k = 0; k <= m; ++k) {
      if (k > 0) fact *= k;
      double binom = 1.0;
      for (int i = 0; i < k; ++i) binom = binom * (m - i) / (i + 1);
      lag += (k % 2 ? -1.0 : 1.0) * binom * std::pow(x, k) / fact;
    }
    CHECK(theta(o, m, 0) == doctest::Approx(0.01 * std::exp(-x / 2) * lag).epsilon(1e-13));
  }
  // dense-exponential evaluation of (Delta/2) sigma^j <m|D+|m> + c.c. term
  CHECK(theta(make(3, AlgebraSpec::su2(2), 0.3, 0.02, 0.4), 1, 1) == doctest::Approx(-0.00946141001968901).epsilon(1e-12));
  CHECK_THROWS_AS(theta(make(2, AlgebraSpec::su2(2), 0.3, 0.02), 3, 0), std::domain_error);
  CHECK_THROWS_AS(theta(make(2, AlgebraSpec::su11(0.5), 0.6, 0.02), 0, 0), std::domain_error);
}

TEST_CASE("diagonal factor equals the diagonal displacement element") {
  for (const AlgebraSpec& a : {AlgebraSpec::oscillator(), AlgebraSpec::su11(0.75), AlgebraSpec::su2(5)}) {
    for (int n : {2, 3, 5}) {
      const ModelConfig c = make(n, a, 0.2, 0.01);
      const DressedConstants d = dressed_constants(c);
      const cplx w = 0.5 * d.C * (sigma_power(n, 1) - 1.0);
      const CMatrix dn = displacement_numeric(a, c.field_dim(), w);
      for (int m = 0; m <= 4; ++m) CHECK(std::abs(diagonal_factor(c, m) - dn(m, m)) < 1e-10);
    }
  }
}

TEST_CASE("rabi frequency: frozen k-sum value") {
  const ModelConfig c = make(2, AlgebraSpec::oscillator(), 0.2, 0.01, 0.0, 128);
  CHECK(std::abs(rabi_frequency(c, 0, 1, 0, 1) - cplx(0.007384930771093086, 0.0)) < 1e-13);
  CHECK(std::abs(rabi_frequency(c, 0, 1, 0, 1) - rabi_ksum(c, 0, 1, 0, 1)) < 1e-12);
}

TEST_CASE("rabi frequency: closed form equals k-sum over a grid") {
  for (const AlgebraSpec& a : {AlgebraSpec::oscillator(), AlgebraSpec::su11(0.25), AlgebraSpec::su2(5)}) {
    for (double g : {0.1, 0.2}) {
      for (int n : {2, 3, 4, 5}) {
        const ModelConfig c = make(n, a, g, 0.01, 0.3, 96);
        for (int m = 0; m < 4; ++m) {
          for (int r = m + 1; r <= 4; ++r) {
            for (const auto& [jp, j] : channel_enumerate(n, m, r)) {
              CHECK(std::abs(rabi_frequency(c, m, r, j, jp) - rabi_ksum(c, m, r, j, jp)) <= 1e-8);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("rabi frequency: selection rule is exact") {
  for (int n = 2; n <= 8; ++n) {
    const ModelConfig c = make(n, AlgebraSpec::oscillator(), 0.2, 0.05, 0.7);
    for (int gap = 1; gap <= 5; ++gap) {
      for (int j = 0; j < n; ++j) {
        for (int jp = 0; jp < n; ++jp) {
          const cplx R = rabi_frequency(c, 0, gap, j, jp);
          if (selection_rule(n, 0, gap, j, jp)) {
            CHECK(R != cplx(0.0, 0.0));
          } else {
            CHECK(R == cplx(0.0, 0.0));
          }
        }
      }
    }
  }
  CHECK(rabi_frequency(make(3, AlgebraSpec::oscillator(), 0.2, 0.0), 0, 1, 1, 0) == cplx(0.0, 0.0));
}

TEST_CASE("channel enumeration") {
  using P = std::pair<int, int>;
  CHECK(channel_enumerate(2, 0, 1) == std::vector<P>{{1, 0}, {0, 1}});
  CHECK(channel_enumerate(3, 2, 3) == std::vector<P>{{2, 0}, {0, 1}, {1, 2}});
  for (int n = 2; n <= 7; ++n) CHECK(channel_enumerate(n, 1, 4).size() == static_cast<std::size_t>(n));
}

TEST_CASE("resonance solve") {
  const ModelConfig c = make(2, AlgebraSpec::su2(2), 0.3, 0.0);
  const auto sol = resonance_solve(c, 0, 1, 0, 1);
  REQUIRE(sol.has_value());
  // Omega / (f_0 + f_1) with f from the dense 3x3 exponential
  CHECK(sol->delta_abs == doctest::Approx(0.967084704510928).epsilon(1e-12));
  CHECK(sol->residual <= 1e-10);
  CHECK(sol->delta_over_g == doctest::Approx(sol->delta_abs / 0.3));
  ModelConfig solved = c;
  solved.delta_abs = sol->delta_abs;
  CHECK(std::abs(resonance_residual(solved, 0, 1, 0, 1)) <= 1e-10);

  // phi = pi/2 with j = 0, j' = 1 at n = 2: both cosines vanish
  CHECK_FALSE(resonance_solve(make(2, AlgebraSpec::su2(2), 0.3, 0.0, std::numbers::pi / 2), 0, 1, 0, 1).has_value());
  // wrong sign of the bracket
  CHECK_FALSE(resonance_solve(c, 0, 1, 1, 0).has_value());
}

TEST_CASE("two-level RWA matrix") {
  const cplx R = std::polar(0.37, 1.2);
  for (double t : {0.0, 0.4, 3.0, 17.0}) CHECK(unitarity_defect(rwa_matrix(R, t)) <= 1e-14);
  CHECK((rwa_matrix(R, 0.0) - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::Matrix2cd full = rwa_matrix(R, 2.0 * std::numbers::pi / std::abs(R));
  CHECK((full + Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((rwa_matrix(0.0, 5.0) - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() == 0.0);

  // ODE oracle: i a' = [[0, conj(R)/2], [R/2, 0]] a by fine RK4
  std::array<cplx, 2> a{1.0, 0.0};
  const double T = 3.3;
  const int steps = 4000;
  const double h = T / steps;
  auto f = [&](const std::array<cplx, 2>& v) {
    const cplx mi(0.0, -1.0);
    return std::array<cplx, 2>{mi * std::conj(R) / 2.0 * v[1], mi * R / 2.0 * v[0]};
  };
  for (int s = 0; s < steps; ++s) {
    auto k1 = f(a);
    auto k2 = f({a[0] + 0.5 * h * k1[0], a[1] + 0.5 * h * k1[1]});
    auto k3 = f({a[0] + 0.5 * h * k2[0], a[1] + 0.5 * h * k2[1]});
    auto k4 = f({a[0] + h * k3[0], a[1] + h * k3[1]});
    for (int i = 0; i < 2; ++i) a[static_cast<std::size_t>(i)] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  const auto e = rwa_two_level_evolve(R, T, {1.0, 0.0});
  CHECK(std::abs(a[0] - e[0]) < 1e-10);
  CHECK(std::abs(a[1] - e[1]) < 1e-10);
}

TEST_CASE("reduced generator is Hermitian") {
  for (const AlgebraSpec& a : {AlgebraSpec::oscillator(), AlgebraSpec::su11(0.75), AlgebraSpec::su2(4)}) {
    const ModelConfig c = make(3, a, 0.2, 0.03, 0.5);
    const ReducedSystem sys(c, {0, 1, 3}, Mode::FullTerms);
    CHECK(hermiticity_defect(sys.couplings()) <= 1e-12);
    for (double t : {0.0, 1.7, 42.0}) CHECK(hermiticity_defect(sys.generator(t)) <= 1e-12);
  }
}

TEST_CASE("RWA reduced system keeps the resonant coupling conj(R)/2") {
  ModelConfig c = make(3, AlgebraSpec::oscillator(), 0.2, 0.0, 0.1);
  const auto [jp, j] = channel_enumerate(3, 0, 1).front();
  c.delta_abs = resonance_solve(c, 0, 1, j, jp)->delta_abs;
  const ReducedSystem sys(c, {0, 1}, Mode::RwaOnly);
  const cplx R = rabi_frequency(c, 0, 1, j, jp);
  CHECK(std::abs(sys.couplings()(j, 3 + jp) - std::conj(R) / 2.0) < 1e-12);
  CHECK(std::abs(sys.couplings()(3 + jp, j) - R / 2.0) < 1e-12);
}

TEST_CASE("integrate_reduced") {
  ModelConfig c = make(2, AlgebraSpec::su2(3), 0.2, 0.0);
  c.delta_abs = resonance_solve(c, 0, 1, 0, 1)->delta_abs;
  const cplx R = rabi_frequency(c, 0, 1, 0, 1);
  const std::vector<double> grid = uniform_grid(0.0, 4.0 * std::numbers::pi / std::abs(R), 300);
  CVector a0 = CVector::Zero(4);
  a0(0) = 1.0;
  const Trajectory tr = integrate_reduced(c, {0, 1}, grid, a0, Mode::RwaOnly);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto e = rwa_two_level_evolve(R, grid[i], {1.0, 0.0});
    worst = std::max({worst, std::abs(tr.amplitudes[i](0) - e[0]), std::abs(tr.amplitudes[i](3) - e[1])});
  }
  CHECK(worst <= 1e-8);
  CHECK(tr.norm_drift <= 1e-9);
  CHECK(tr.error_estimate < 1e-10);
  CHECK(tr.rabi_over_omega > 0.0);

  // Delta = 0: nothing couples
  const ModelConfig still = make(3, AlgebraSpec::oscillator(), 0.2, 0.0);
  CVector b0 = CVector::Zero(9);
  b0(1) = cplx(0.6, 0.0);
  b0(4) = cplx(0.0, 0.8);
  const Trajectory st = integrate_reduced(still, {0, 1, 2}, uniform_grid(0.0, 10.0, 20), b0, Mode::FullTerms);
  CHECK((st.amplitudes.back() - b0).cwiseAbs().maxCoeff() == 0.0);

  // three levels with every term kept: norm is the invariant
  const ModelConfig three = make(3, AlgebraSpec::oscillator(), 0.2, 0.04, 0.3);
  CVector c0 = CVector::Zero(9);
  c0(0) = 1.0;
  const Trajectory t3 = integrate_reduced(three, {0, 1, 2}, uniform_grid(0.0, 30.0, 300), c0, Mode::FullTerms);
  CHECK(t3.norm_drift <= 1e-8);

  CHECK_THROWS_AS(integrate_reduced(three, {0}, grid, CVector::Zero(3), Mode::RwaOnly), std::invalid_argument);
  CHECK_THROWS_AS(integrate_reduced(three, {0, 1}, grid, CVector::Zero(5), Mode::RwaOnly), std::invalid_argument);
}

TEST_CASE("integrate_reduced reports tolerance failure") {
  const ModelConfig c = make(3, AlgebraSpec::oscillator(), 0.2, 0.04, 0.3);
  CVector a0 = CVector::Zero(6);
  a0(0) = 1.0;
  IntegratorOptions opts;
  opts.tol = 1e-30;
  opts.max_total_steps = 4000;
  try {
    integrate_reduced(c, {0, 1}, uniform_grid(0.0, 5.0, 10), a0, Mode::FullTerms, opts);
    FAIL("expected IntegrationError");
  } catch (const IntegrationError& e) {
    CHECK(e.achieved() > 0.0);
  }
}

TEST_CASE("integrate_full") {
  // decoupled, no splitting: amplitudes keep their modulus
  const ModelConfig free = make(2, AlgebraSpec::oscillator(), 0.0, 0.0, 0.0, 16);
  const SpectralData fs = spectral_data(free);
  CVector a0 = CVector::Zero(4);
  a0(0) = std::sqrt(0.3);
  a0(3) = std::sqrt(0.7);
  const Trajectory tf = integrate_full(free, uniform_grid(0.0, 9.0, 30), full_state(fs, {0, 1}, a0), {0, 1});
  for (const CVector& a : tf.amplitudes) {
    CHECK(std::abs(std::norm(a(0)) - 0.3) < 1e-13);
    CHECK(std::abs(std::norm(a(3)) - 0.7) < 1e-13);
  }

  // resonant spin-1/2 channel: population frequency close to |R|, unitary evolution
  ModelConfig c = make(2, AlgebraSpec::su2(1), 0.05, 0.0);
  c.delta_abs = resonance_solve(c, 0, 1, 0, 1)->delta_abs;
  const cplx R = rabi_frequency(c, 0, 1, 0, 1);
  const SpectralData s = spectral_data(c);
  CVector b0 = CVector::Zero(4);
  b0(0) = 1.0;
  const std::vector<double> grid = uniform_grid(0.0, 4.0 * std::numbers::pi / std::abs(R), 4000);
  const Trajectory tr = integrate_full(c, grid, full_state(s, {0, 1}, b0), {0, 1});
  const double freq = population_frequency(tr.times, tr.population(0));
  CHECK(std::abs(freq - std::abs(R)) / std::abs(R) < 0.1);
  CHECK(tr.norm_drift <= 1e-8);
}

TEST_CASE("population frequency from crossings") {
  std::vector<double> t, p;
  for (int i = 0; i <= 2000; ++i) {
    t.push_back(0.01 * i);
    p.push_back(std::pow(std::cos(0.5 * 1.3 * t.back()), 2));
  }
  CHECK(population_frequency(t, p) == doctest::Approx(1.3).epsilon(1e-5));
  CHECK(std::isnan(population_frequency({0.0, 1.0}, {1.0, 0.9})));
}
