#pragma once

// Closed-form matrix elements <n| e^{z L+ - conj(z) L-} |m> for the three
// representations, with the z -> kappa map they are written in.

#include "qrabi/fock_algebra.hpp"

namespace qrabi::coherent {

struct CoherentParameter {
  cplx z;
  cplx kappa;
  AlgebraSpec algebra;
};

/// Oscillator: kappa = z. SU11: kappa = sinh|z|/|z| z. SU2: kappa = sin|z|/|z| z.
/// Below |z| = 1e-6 the ratio is taken from its two-term series.
cplx kappa_map(const AlgebraSpec& algebra, cplx z);
CoherentParameter make_parameter(const AlgebraSpec& algebra, cplx z);

/// <n|U(z)|m>, U(z) = e^{z a^dagger - conj(z) a}.
cplx matelem_u(int n, int m, cplx z);
/// <K,n|V(z)|K,m>, V(z) = e^{z K+ - conj(z) K-}.
cplx matelem_v(double K, int n, int m, cplx z);
/// <J,n|W(z)|J,m>, W(z) = e^{z J+ - conj(z) J-}; n, m <= 2J.
cplx matelem_w(int twoJ, int n, int m, cplx z);

cplx matelem(const AlgebraSpec& algebra, int n, int m, cplx z);

struct OracleReport {
  double max_deviation = 0.0;          // at dim
  double doubled_deviation = 0.0;      // at 2*dim (equal to max_deviation for SU2)
  int dim = 0;
  int max_index = 0;
  bool converged = true;
  std::string message;
};

/// max_{n,m <= max_index} |closed form - displacement_numeric|, re-run at
/// 2*dim for truncated algebras. Non-convergence is flagged when doubling
/// moves the deviation by more than 10% and by more than 1e-12 absolute.
OracleReport oracle_check(const AlgebraSpec& algebra, cplx z, int max_index, int dim);

/// Same comparison against a precomputed numeric operator.
double closed_form_deviation(const AlgebraSpec& algebra, cplx z, int max_index, const CMatrix& numeric);

}  // namespace qrabi::coherent
