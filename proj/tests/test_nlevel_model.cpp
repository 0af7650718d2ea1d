#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qrabi/nlevel_model.hpp"

using namespace qrabi;
using namespace qrabi::model;

namespace {

ModelConfig make(int n, AlgebraSpec alg, double g, int dim = 64) {
  ModelConfig c;
  c.n = n;
  c.algebra = alg;
  c.g = g;
  c.trunc_dim = dim;
  return c;
}

}  // namespace

TEST_CASE("sigma powers are exact where the value is representable") {
  CHECK(sigma_power(2, 1) == cplx(-1.0, 0.0));
  CHECK(sigma_power(4, 1) == cplx(0.0, 1.0));
  CHECK(sigma_power(4, 3) == cplx(0.0, -1.0));
  CHECK(sigma_power(5, 7) == sigma_power(5, 2));
  CHECK(sigma_power(5, -1) == std::conj(sigma_power(5, 1)));
}

TEST_CASE("clock and shift matrices") {
  CMatrix p(2, 2);
  p << 0, 1, 1, 0;
  CHECK(max_abs_diff(sigma1(2), p) == 0.0);
  CMatrix s3(3, 3);
  s3 << 0, 0, 1, 1, 0, 0, 0, 1, 0;
  CHECK(max_abs_diff(sigma1(3), s3) == 0.0);

  CMatrix pw = CMatrix::Identity(5, 5);
  for (int i = 0; i < 5; ++i) pw = sigma1(5) * pw;
  CHECK(max_abs_diff(pw, CMatrix::Identity(5, 5)) == 0.0);

  CHECK(sigma3(2)(1, 1) == cplx(-1.0, 0.0));
  const CMatrix d4 = sigma3(4);
  CHECK(d4(1, 1) == cplx(0.0, 1.0));
  CHECK(d4(2, 2) == cplx(-1.0, 0.0));
  CHECK(d4(3, 3) == cplx(0.0, -1.0));
  CHECK(std::abs(sigma3(3).determinant() - 1.0) < 1e-15);

  for (int n = 2; n <= 12; ++n) {
    CMatrix a = CMatrix::Identity(n, n);
    CMatrix b = CMatrix::Identity(n, n);
    for (int i = 0; i < n; ++i) {
      a = sigma1(n) * a;
      b = sigma3(n) * b;
    }
    CHECK(max_abs_diff(a, CMatrix::Identity(n, n)) <= 1e-13);
    CHECK(max_abs_diff(b, CMatrix::Identity(n, n)) <= 1e-13);
  }
}

TEST_CASE("Walsh-Hadamard matrix") {
  const double h = 1.0 / std::sqrt(2.0);
  CMatrix w2(2, 2);
  w2 << h, h, h, -h;
  CHECK(hadamard_w(2) == w2);
  const CMatrix w7 = hadamard_w(7);
  CHECK(max_abs_diff(w7 * w7.adjoint(), CMatrix::Identity(7, 7)) < 1e-14);
  CHECK(diagonalization_check(2) <= 1e-15);
  CHECK(diagonalization_check(3) <= 1e-15);
  CHECK(diagonalization_check(16) <= 1e-12);
}

TEST_CASE("atom eigenstates") {
  const CVector u = atom_eigenstate(4, 0);
  for (int i = 0; i < 4; ++i) CHECK(u(i) == cplx(0.5, 0.0));
  const CVector v = atom_eigenstate(2, 1);
  CHECK(std::abs(v(0) - 1.0 / std::sqrt(2.0)) < 1e-16);
  CHECK(std::abs(v(1) + 1.0 / std::sqrt(2.0)) < 1e-16);
  for (int n : {3, 6}) {
    CMatrix sum = CMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
      const CVector e = atom_eigenstate(n, j);
      sum += e * e.adjoint();
      CHECK((sigma1(n) * e - sigma_power(n, j) * e).norm() < 1e-14);
    }
    CHECK(max_abs_diff(sum, CMatrix::Identity(n, n)) < 1e-14);
  }
}

TEST_CASE("Hamiltonian: two-level reduction and hermiticity") {
  ModelConfig c = make(2, AlgebraSpec::oscillator(), 0.2, 6);
  c.delta_abs = 0.05;
  const CMatrix h = build_hamiltonian(c).matrix;
  const LadderTriple l = build_ladder(c.algebra, 6);
  CMatrix s1(2, 2), s3(2, 2);
  s1 << 0, 1, 1, 0;
  s3 << 1, 0, 0, -1;
  // conj(Delta)/2 Sigma3 + Delta/2 Sigma3^dagger = Delta sigma3 at n = 2: the two-level form with splitting 2 Delta
  const double splitting = 2.0 * c.delta_abs;
  const CMatrix ref = c.omega * kron(CMatrix::Identity(2, 2), l.l_3) + 0.5 * splitting * kron(s3, CMatrix::Identity(6, 6)) +
                      c.g * kron(s1, l.l_plus + l.l_minus);
  CHECK(max_abs_diff(h, ref) < 1e-15);

  ModelConfig r = make(3, AlgebraSpec::su11(0.75), 0.17, 10);
  r.delta_abs = 0.03;
  r.delta_phase = 1.1;
  CHECK(hermiticity_defect(build_hamiltonian(r).matrix) <= 1e-14);
}

TEST_CASE("Hamiltonian: decoupled spectrum is n-fold degenerate") {
  ModelConfig c = make(3, AlgebraSpec::su2(2), 0.0);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(build_hamiltonian(c).matrix);
  const Eigen::VectorXd ev = eig.eigenvalues();
  for (int k = 0; k < 3; ++k) {
    for (int rep = 0; rep < 3; ++rep) CHECK(std::abs(ev(3 * k + rep) - (-1.0 + k)) < 1e-14);
  }
}

TEST_CASE("dressed constants") {
  const ModelConfig s = make(2, AlgebraSpec::su2(3), 0.3);
  const DressedConstants d = dressed_constants(s);
  CHECK(d.Omega == doctest::Approx(std::sqrt(1.0 + 0.36)).epsilon(1e-15));
  CHECK(d.C == doctest::Approx(std::atan(0.6)).epsilon(1e-15));
  const DressedConstants k = dressed_constants(make(2, AlgebraSpec::su11(0.5), 0.2));
  CHECK(k.Omega == doctest::Approx(std::sqrt(1.0 - 0.16)).epsilon(1e-15));
  CHECK(k.C == doctest::Approx(std::atanh(0.4)).epsilon(1e-15));
  CHECK_THROWS_AS(dressed_constants(make(2, AlgebraSpec::su11(0.5), 0.5)), std::domain_error);
  const DressedConstants o = dressed_constants(make(2, AlgebraSpec::oscillator(), 0.2));
  CHECK(o.Omega == 1.0);
  CHECK(o.shift == doctest::Approx(-0.04));
  CHECK(eigen_energy(make(2, AlgebraSpec::su2(3), 0.3), 1) == doctest::Approx(d.Omega * (-1.5 + 1)));
}

TEST_CASE("spectral data: z_j on a circle") {
  const SpectralData s = spectral_data(make(5, AlgebraSpec::su11(0.75), 0.15));
  for (int j = 0; j < 5; ++j) {
    CHECK(std::abs(std::abs(s.z[static_cast<std::size_t>(j)]) - s.C) < 1e-15);
    CHECK(s.z[static_cast<std::size_t>(j)] == s.C * sigma_power(5, j));
  }
}

TEST_CASE("spectral data: decoupled oscillator") {
  const SpectralData s = spectral_data(make(3, AlgebraSpec::oscillator(), 0.0, 8));
  CHECK(s.Omega == 1.0);
  for (int m = 0; m < 8; ++m) CHECK(s.energy(m) == doctest::Approx(m));
  CVector expected = CVector::Zero(24);
  const CVector atom = atom_eigenstate(3, 1);
  for (int a = 0; a < 3; ++a) expected(a * 8 + 2) = atom(a);
  CHECK((s.eigenvector(1, 2) - expected).norm() < 1e-15);
}

TEST_CASE("spin-1/2 pair: eigenvalues are +-Omega/2") {
  const ModelConfig c = make(2, AlgebraSpec::su2(1), 0.3);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(build_h0(c));
  const double half = 0.5 * std::sqrt(1.36);
  const Eigen::VectorXd ev = eig.eigenvalues();
  CHECK(std::abs(ev(0) + half) < 1e-14);
  CHECK(std::abs(ev(1) + half) < 1e-14);
  CHECK(std::abs(ev(2) - half) < 1e-14);
  CHECK(std::abs(ev(3) - half) < 1e-14);
  CHECK(std::abs(ev(2) - 0.58309518948453) < 1e-13);
}

TEST_CASE("key formula") {
  for (int j = 0; j < 3; ++j) {
    CHECK(key_formula_check(make(3, AlgebraSpec::su2(4), 0.2), j).deviation <= 1e-12);
    CHECK(key_formula_check(make(3, AlgebraSpec::oscillator(), 0.2, 128), j).deviation <= 1e-8);
  }
  CHECK(key_formula_check(make(2, AlgebraSpec::oscillator(), 0.0), 1).deviation == 0.0);
}

TEST_CASE("eigenvectors and degeneracy") {
  for (const AlgebraSpec& a : {AlgebraSpec::oscillator(), AlgebraSpec::su11(0.25), AlgebraSpec::su2(5)}) {
    const ModelConfig c = make(3, a, 0.2, 64);
    const SpectralData s = spectral_data(c);
    const CMatrix h0 = build_h0(c);
    const int top = a.truncated() ? 16 : a.spin_2J;
    for (int m = 0; m < top; ++m) {
      for (int j = 0; j < 3; ++j) {
        CHECK(eigen_residual(s, h0, j, m) <= (a.truncated() ? 1e-8 : 1e-11));
        const CVector v = s.eigenvector(j, m);
        CHECK(std::abs(v.dot(h0 * v).real() - s.energy(m)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("multi-cat states") {
  const ModelConfig c = make(2, AlgebraSpec::oscillator(), 0.2, 64);
  const SpectralData s = spectral_data(c);
  const std::vector<CVector> cats = multi_cat_states(s, 1);
  const double h = 1.0 / std::sqrt(2.0);
  CHECK((cats[0] - h * (s.eigenvector(0, 1) + s.eigenvector(1, 1))).norm() < 1e-15);
  CHECK((cats[1] - h * (s.eigenvector(0, 1) - s.eigenvector(1, 1))).norm() < 1e-15);

  for (int n : {3, 4}) {
    const SpectralData t = spectral_data(make(n, AlgebraSpec::su2(4), 0.25));
    for (int m = 0; m <= 4; ++m) {
      const std::vector<CVector> cs = multi_cat_states(t, m);
      CMatrix basis(cs.front().size(), n);
      for (int j = 0; j < n; ++j) basis.col(j) = cs[static_cast<std::size_t>(j)];
      CHECK(max_abs_diff(basis.adjoint() * basis, CMatrix::Identity(n, n)) < 1e-10);
      CMatrix diag = CMatrix::Zero(n, n);
      for (int j = 0; j < n; ++j) diag(j, j) = sigma_power(n, j);
      CHECK(max_abs_diff(basis.adjoint() * atom_hopping_operator(t, m) * basis, diag) < 1e-9);
    }
  }
}

TEST_CASE("configuration checks") {
  ModelConfig c;
  c.n = 1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ModelConfig{};
  c.omega = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ModelConfig{};
  c.delta_abs = 0.001;
  c.g = 0.1;
  CHECK(c.strong_coupling());
  c.delta_abs = 0.5;
  CHECK_FALSE(c.strong_coupling());
}
