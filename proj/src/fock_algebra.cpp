#include "qrabi/fock_algebra.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace qrabi {

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

double unitarity_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("unitarity_defect: non-square");
  return max_abs_diff(m.adjoint() * m, CMatrix::Identity(m.rows(), m.cols()));
}

bool is_unitary(const CMatrix& m, double tol) { return unitarity_defect(m) <= tol; }

double hermiticity_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("hermiticity_defect: non-square");
  return max_abs_diff(m, m.adjoint());
}

bool is_hermitian(const CMatrix& m, double tol) { return hermiticity_defect(m) <= tol; }

AlgebraSpec AlgebraSpec::su11(double K) {
  AlgebraSpec a;
  a.kind = Kind::SU11;
  a.bargmann_K = K;
  a.validate();
  return a;
}

AlgebraSpec AlgebraSpec::su2(int twoJ) {
  AlgebraSpec a;
  a.kind = Kind::SU2;
  a.spin_2J = twoJ;
  a.validate();
  return a;
}

void AlgebraSpec::validate() const {
  switch (kind) {
    case Kind::Oscillator:
      return;
    case Kind::SU11:
      if (!(bargmann_K > 0.0) || !std::isfinite(bargmann_K)) {
        throw std::invalid_argument("su(1,1) representation needs K > 0");
      }
      return;
    case Kind::SU2:
      if (spin_2J < 1) throw std::invalid_argument("su(2) representation needs 2J >= 1");
      return;
  }
}

std::string AlgebraSpec::name() const {
  switch (kind) {
    case Kind::Oscillator:
      return "oscillator";
    case Kind::SU11:
      return "su11";
    case Kind::SU2:
      return "su2";
  }
  return "unknown";
}

LadderTriple build_ladder(const AlgebraSpec& algebra, int dim) {
  algebra.validate();
  if (dim < 2) throw std::invalid_argument("build_ladder: dim must be >= 2");
  if (algebra.kind == AlgebraSpec::Kind::SU2 && dim != algebra.spin_2J + 1) {
    throw std::invalid_argument("build_ladder: su(2) dimension must equal 2J+1");
  }

  LadderTriple t;
  t.dim = dim;
  t.algebra = algebra;
  t.truncated = algebra.truncated();
  t.l_plus = CMatrix::Zero(dim, dim);
  t.l_3 = CMatrix::Zero(dim, dim);

  for (int k = 0; k < dim; ++k) {
    double diag = 0.0;
    double weight = 0.0;  // |L+ |k>|^2 = (k+1) * weight
    switch (algebra.kind) {
      case AlgebraSpec::Kind::Oscillator:
        diag = k;
        weight = 1.0;
        break;
      case AlgebraSpec::Kind::SU11:
        diag = algebra.bargmann_K + k;
        weight = 2.0 * algebra.bargmann_K + k;
        break;
      case AlgebraSpec::Kind::SU2:
        diag = -algebra.spin_J() + k;
        weight = static_cast<double>(algebra.spin_2J - k);
        break;
    }
    t.l_3(k, k) = diag;
    if (k + 1 < dim) t.l_plus(k + 1, k) = std::sqrt((k + 1) * weight);
  }
  t.l_minus = t.l_plus.adjoint();
  return t;
}

CMatrix expm(const CMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("expm: non-square matrix");
  if (!m.allFinite()) throw std::invalid_argument("expm: non-finite entries");
  return m.exp();
}

CMatrix displacement_numeric(const LadderTriple& ladder, cplx z) {
  // X = z L+ - conj(z) L- is anti-Hermitian; H = iX is Hermitian and
  // e^X = V diag(e^{-i lambda}) V^dagger.
  const CMatrix generator = z * ladder.l_plus - std::conj(z) * ladder.l_minus;
  const CMatrix herm = cplx(0.0, 1.0) * generator;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm);
  if (eig.info() != Eigen::Success) throw std::runtime_error("displacement_numeric: eigensolver failed");
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  CVector phases(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) phases(i) = std::polar(1.0, -lambda(i));
  const CMatrix& v = eig.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

CMatrix displacement_numeric(const AlgebraSpec& algebra, int dim, cplx z) {
  return displacement_numeric(build_ladder(algebra, dim), z);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix leading_block(const CMatrix& m, int size) {
  if (size < 0 || size > m.rows() || size > m.cols()) {
    throw std::invalid_argument("leading_block: size out of range");
  }
  return m.topLeftCorner(size, size);
}

ConvergenceResult converge_dimension(int start_dim, int max_dim, double tol,
                                     const std::function<double(int)>& value) {
  ConvergenceResult res;
  res.dim = start_dim;
  res.value = value(start_dim);
  res.last_change = std::numeric_limits<double>::infinity();
  while (2 * res.dim <= max_dim) {
    const double next = value(2 * res.dim);
    res.last_change = std::abs(next - res.value);
    res.dim *= 2;
    res.value = next;
    if (res.last_change < tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace qrabi
