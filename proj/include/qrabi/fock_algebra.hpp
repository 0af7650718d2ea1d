#pragma once

// Dense ladder-operator matrices for the oscillator, su(1,1) and su(2)
// representations in a (possibly truncated) Fock basis, plus the numerical
// matrix exponential used as the oracle for every e^{zL+ - conj(z)L-}.
//
// Basis ordering is Fock index ascending, 0-based. Tensor products are always
// atom (x) field.

#include <complex>
#include <functional>
#include <string>

#include <Eigen/Dense>

namespace qrabi {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// max_{ij} |a_ij - b_ij|. Throws std::invalid_argument on shape mismatch.
double max_abs_diff(const CMatrix& a, const CMatrix& b);
/// ||M^dagger M - I||_max <= tol.
bool is_unitary(const CMatrix& m, double tol);
double unitarity_defect(const CMatrix& m);
/// ||M - M^dagger||_max <= tol.
bool is_hermitian(const CMatrix& m, double tol);
double hermiticity_defect(const CMatrix& m);

/// Representation selector for {L+, L-, L3}.
struct AlgebraSpec {
  enum class Kind { Oscillator, SU11, SU2 };

  Kind kind = Kind::Oscillator;
  double bargmann_K = 0.0;  // SU11 only
  int spin_2J = 0;          // SU2 only

  static AlgebraSpec oscillator() { return {}; }
  static AlgebraSpec su11(double K);
  static AlgebraSpec su2(int twoJ);

  bool truncated() const { return kind != Kind::SU2; }
  double spin_J() const { return 0.5 * spin_2J; }
  void validate() const;
  std::string name() const;

  friend bool operator==(const AlgebraSpec&, const AlgebraSpec&) = default;
};

struct LadderTriple {
  CMatrix l_plus;
  CMatrix l_minus;
  CMatrix l_3;
  int dim = 0;
  AlgebraSpec algebra;
  bool truncated = false;
};

/// Matrices of {L+, L-, L3} on basis indices 0..dim-1. For SU2, dim must be
/// 2J+1; for the infinite representations the last row/column of L+ is the
/// truncation boundary.
LadderTriple build_ladder(const AlgebraSpec& algebra, int dim);

/// Matrix exponential (Padé scaling-and-squaring).
CMatrix expm(const CMatrix& m);

/// e^{z L+ - conj(z) L-} at the given dimension.
CMatrix displacement_numeric(const AlgebraSpec& algebra, int dim, cplx z);
CMatrix displacement_numeric(const LadderTriple& ladder, cplx z);

/// Kronecker product a (x) b, first factor outermost.
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Leading size x size block.
CMatrix leading_block(const CMatrix& m, int size);

struct ConvergenceResult {
  int dim = 0;
  double value = 0.0;
  double last_change = 0.0;
  bool converged = false;
};

/// Doubles dim from start_dim until |value(2d) - value(d)| < tol or dim
/// would exceed max_dim.
ConvergenceResult converge_dimension(int start_dim, int max_dim, double tol,
                                     const std::function<double(int)>& value);

}  // namespace qrabi
