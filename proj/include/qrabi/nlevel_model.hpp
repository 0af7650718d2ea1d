#pragma once

// n-level atom (x) single radiation mode: clock/shift matrices, the generalized
// Walsh-Hadamard matrix, the Hamiltonian and the strong-coupling eigensystem
// of H0 = omega 1 (x) L3 + g (Sigma1 (x) L+ + Sigma1^dagger (x) L-).

#include <vector>

#include "qrabi/fock_algebra.hpp"

namespace qrabi::model {

/// sigma^k with sigma = e^{2 pi i / n}; evaluated from the reduced angle, never
/// by repeated multiplication.
cplx sigma_power(int n, long long k);

struct ModelConfig {
  int n = 2;
  double omega = 1.0;
  double g = 0.1;
  double delta_abs = 0.0;
  double delta_phase = 0.0;
  AlgebraSpec algebra;
  int trunc_dim = 64;

  cplx delta() const { return std::polar(delta_abs, delta_phase); }
  /// Field-space dimension: trunc_dim, or 2J+1 for su(2).
  int field_dim() const;
  /// Throws std::invalid_argument on malformed parameters.
  void validate() const;
  /// 2g/omega < 1 (needed by tanh^{-1} for su(1,1)); always true otherwise.
  bool spectral_domain_ok() const;
  /// False unless |Delta| <= 0.1 g.
  bool strong_coupling() const { return delta_abs <= 0.1 * g; }

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

CMatrix sigma1(int n);
CMatrix sigma3(int n);
/// Row r, column c: sigma^{(n-r)c} / sqrt(n).
CMatrix hadamard_w(int n);
/// ||W Sigma3 W^dagger - Sigma1||_max.
double diagonalization_check(int n);
/// |sigma^j> = (1, sigma^{(n-1)j}, ..., sigma^j) / sqrt(n).
CVector atom_eigenstate(int n, int j);

struct Hamiltonian {
  CMatrix matrix;
  bool spectral_domain_ok = true;
};

/// Full H = H0 + (conj(Delta)/2) Sigma3 (x) 1 + (Delta/2) Sigma3^dagger (x) 1.
Hamiltonian build_hamiltonian(const ModelConfig& cfg);
/// Strong-coupling H0 (the Delta terms dropped).
CMatrix build_h0(const ModelConfig& cfg);

struct SpectralData {
  ModelConfig cfg;
  double Omega = 0.0;
  double C = 0.0;
  double shift = 0.0;                  // -g^2/omega^2 for the oscillator, else 0
  std::vector<cplx> z;                 // z_j = C sigma^j
  std::vector<double> energies;        // E_m, m < field_dim
  std::vector<CMatrix> field_unitaries; // e^{-(1/2)(z_j L+ - conj(z_j) L-)}

  /// |{sigma^j, m}> = |sigma^j> (x) e^{-(1/2)(z_j L+ - h.c.)} |m>.
  CVector eigenvector(int j, int m) const;
  double energy(int m) const { return energies.at(static_cast<std::size_t>(m)); }
};

/// Throws std::domain_error for su(1,1) with 2g/omega >= 1.
SpectralData spectral_data(const ModelConfig& cfg);

/// Closed-form Omega, C and shift without building the eigenvectors.
struct DressedConstants {
  double Omega = 0.0;
  double C = 0.0;
  double shift = 0.0;
};
DressedConstants dressed_constants(const ModelConfig& cfg);

/// E_m from the closed-form pattern.
double eigen_energy(const ModelConfig& cfg, int m);

struct KeyFormulaReport {
  double deviation = 0.0;
  int dim = 0;
  int block = 0;
};

/// ||e^{+X/2} (omega L3 + g(sigma^j L+ + conj(sigma^j) L-)) e^{-X/2} - Omega(L3 + shift)||_max
/// on the leading half block (the full matrix for su(2)), X = z_j L+ - conj(z_j) L-.
KeyFormulaReport key_formula_check(const ModelConfig& cfg, int j);

/// Multi-cat states |{sigma^j, psi_m}> = sum_k |{sigma^k, m}> W_{kj}, j = 0..n-1.
std::vector<CVector> multi_cat_states(const SpectralData& spec, int m);

/// sum_j |{sigma^j, m}><{sigma^{j-1}, m}|.
CMatrix atom_hopping_operator(const SpectralData& spec, int m);

/// ||H0 v - E_m v|| for v = |{sigma^j, m}>.
double eigen_residual(const SpectralData& spec, const CMatrix& h0, int j, int m);

}  // namespace qrabi::model
