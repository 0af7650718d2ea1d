#include "qrabi/nlevel_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qrabi::model {

cplx sigma_power(int n, long long k) {
  if (n < 1) throw std::invalid_argument("sigma_power: n must be >= 1");
  long long r = k % n;
  if (r < 0) r += n;
  if (r == 0) return {1.0, 0.0};
  // exact at quarter turns, and sigma^{n-r} = conj(sigma^r) bit for bit
  if (2 * r == n) return {-1.0, 0.0};
  if (4 * r == n) return {0.0, 1.0};
  if (2 * r > n) return std::conj(sigma_power(n, n - r));
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / n;
  return {std::cos(angle), std::sin(angle)};
}

int ModelConfig::field_dim() const {
  return algebra.kind == AlgebraSpec::Kind::SU2 ? algebra.spin_2J + 1 : trunc_dim;
}

void ModelConfig::validate() const {
  algebra.validate();
  if (n < 2) throw std::invalid_argument("model: n must be >= 2");
  if (!(omega > 0.0) || !std::isfinite(omega)) throw std::invalid_argument("model: omega must be > 0");
  if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("model: g must be >= 0");
  if (!(delta_abs >= 0.0) || !std::isfinite(delta_abs)) throw std::invalid_argument("model: |Delta| must be >= 0");
  if (!std::isfinite(delta_phase)) throw std::invalid_argument("model: Delta phase must be finite");
  if (algebra.truncated() && trunc_dim < 2) throw std::invalid_argument("model: trunc_dim must be >= 2");
}

bool ModelConfig::spectral_domain_ok() const {
  return algebra.kind != AlgebraSpec::Kind::SU11 || 2.0 * g / omega < 1.0;
}

CMatrix sigma1(int n) {
  if (n < 2) throw std::invalid_argument("sigma1: n must be >= 2");
  CMatrix s = CMatrix::Zero(n, n);
  for (int i = 1; i < n; ++i) s(i, i - 1) = 1.0;
  s(0, n - 1) = 1.0;
  return s;
}

CMatrix sigma3(int n) {
  if (n < 2) throw std::invalid_argument("sigma3: n must be >= 2");
  CMatrix s = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) s(i, i) = sigma_power(n, i);
  return s;
}

CMatrix hadamard_w(int n) {
  if (n < 2) throw std::invalid_argument("hadamard_w: n must be >= 2");
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  CMatrix w(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) w(r, c) = norm * sigma_power(n, static_cast<long long>(n - r) * c);
  }
  return w;
}

double diagonalization_check(int n) {
  const CMatrix w = hadamard_w(n);
  return max_abs_diff(w * sigma3(n) * w.adjoint(), sigma1(n));
}

CVector atom_eigenstate(int n, int j) {
  if (n < 2) throw std::invalid_argument("atom_eigenstate: n must be >= 2");
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = norm * sigma_power(n, static_cast<long long>(n - i) * j);
  return v;
}

CMatrix build_h0(const ModelConfig& cfg) {
  cfg.validate();
  const LadderTriple ladder = build_ladder(cfg.algebra, cfg.field_dim());
  const CMatrix s1 = sigma1(cfg.n);
  const CMatrix id_atom = CMatrix::Identity(cfg.n, cfg.n);
  return cfg.omega * kron(id_atom, ladder.l_3) +
         cfg.g * (kron(s1, ladder.l_plus) + kron(s1.adjoint(), ladder.l_minus));
}

Hamiltonian build_hamiltonian(const ModelConfig& cfg) {
  Hamiltonian h;
  h.matrix = build_h0(cfg);
  const CMatrix s3 = sigma3(cfg.n);
  const CMatrix id_field = CMatrix::Identity(cfg.field_dim(), cfg.field_dim());
  const cplx delta = cfg.delta();
  h.matrix += 0.5 * std::conj(delta) * kron(s3, id_field) + 0.5 * delta * kron(s3.adjoint(), id_field);
  h.spectral_domain_ok = cfg.spectral_domain_ok();
  return h;
}

DressedConstants dressed_constants(const ModelConfig& cfg) {
  cfg.validate();
  const double ratio = 2.0 * cfg.g / cfg.omega;
  DressedConstants d;
  switch (cfg.algebra.kind) {
    case AlgebraSpec::Kind::Oscillator:
      d.Omega = cfg.omega;
      d.C = ratio;
      d.shift = -(cfg.g * cfg.g) / (cfg.omega * cfg.omega);
      break;
    case AlgebraSpec::Kind::SU11:
      if (!(ratio < 1.0)) throw std::domain_error("su(1,1) spectral data needs 2g/omega < 1 (tanh^-1 domain)");
      d.Omega = cfg.omega * std::sqrt(1.0 - ratio * ratio);
      d.C = std::atanh(ratio);
      break;
    case AlgebraSpec::Kind::SU2:
      d.Omega = cfg.omega * std::sqrt(1.0 + ratio * ratio);
      d.C = std::atan(ratio);
      break;
  }
  return d;
}

double eigen_energy(const ModelConfig& cfg, int m) {
  const DressedConstants d = dressed_constants(cfg);
  switch (cfg.algebra.kind) {
    case AlgebraSpec::Kind::Oscillator:
      return d.Omega * (d.shift + m);
    case AlgebraSpec::Kind::SU11:
      return d.Omega * (cfg.algebra.bargmann_K + m);
    case AlgebraSpec::Kind::SU2:
      return d.Omega * (-cfg.algebra.spin_J() + m);
  }
  return 0.0;
}

SpectralData spectral_data(const ModelConfig& cfg) {
  const DressedConstants d = dressed_constants(cfg);
  SpectralData s;
  s.cfg = cfg;
  s.Omega = d.Omega;
  s.C = d.C;
  s.shift = d.shift;
  const int dim = cfg.field_dim();
  const LadderTriple ladder = build_ladder(cfg.algebra, dim);
  for (int j = 0; j < cfg.n; ++j) {
    const cplx zj = d.C * sigma_power(cfg.n, j);
    s.z.push_back(zj);
    s.field_unitaries.push_back(displacement_numeric(ladder, -0.5 * zj));
  }
  for (int m = 0; m < dim; ++m) s.energies.push_back(eigen_energy(cfg, m));
  return s;
}

CVector SpectralData::eigenvector(int j, int m) const {
  const int dim = cfg.field_dim();
  if (j < 0 || j >= cfg.n) throw std::out_of_range("eigenvector: atom index out of range");
  if (m < 0 || m >= dim) throw std::out_of_range("eigenvector: field index out of range");
  const CVector atom = atom_eigenstate(cfg.n, j);
  const CVector field = field_unitaries[static_cast<std::size_t>(j)].col(m);
  CVector v(cfg.n * dim);
  for (int a = 0; a < cfg.n; ++a) v.segment(a * dim, dim) = atom(a) * field;
  return v;
}

KeyFormulaReport key_formula_check(const ModelConfig& cfg, int j) {
  const DressedConstants d = dressed_constants(cfg);
  const int dim = cfg.field_dim();
  const LadderTriple ladder = build_ladder(cfg.algebra, dim);
  const cplx s = sigma_power(cfg.n, j);
  const CMatrix hj = cfg.omega * ladder.l_3 + cfg.g * (s * ladder.l_plus + std::conj(s) * ladder.l_minus);
  const cplx zj = d.C * s;
  const CMatrix forward = displacement_numeric(ladder, 0.5 * zj);
  const CMatrix backward = displacement_numeric(ladder, -0.5 * zj);
  const CMatrix conj = forward * hj * backward;
  const CMatrix target = d.Omega * (ladder.l_3 + d.shift * CMatrix::Identity(dim, dim));

  KeyFormulaReport rep;
  rep.dim = dim;
  rep.block = ladder.truncated ? dim / 2 : dim;
  rep.deviation = max_abs_diff(leading_block(conj, rep.block), leading_block(target, rep.block));
  return rep;
}

std::vector<CVector> multi_cat_states(const SpectralData& spec, int m) {
  const int n = spec.cfg.n;
  const CMatrix w = hadamard_w(n);
  std::vector<CVector> basis;
  basis.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) basis.push_back(spec.eigenvector(k, m));
  std::vector<CVector> cats;
  for (int j = 0; j < n; ++j) {
    CVector v = CVector::Zero(basis.front().size());
    for (int k = 0; k < n; ++k) v += w(k, j) * basis[static_cast<std::size_t>(k)];
    cats.push_back(std::move(v));
  }
  return cats;
}

CMatrix atom_hopping_operator(const SpectralData& spec, int m) {
  const int n = spec.cfg.n;
  const Eigen::Index size = static_cast<Eigen::Index>(n) * spec.cfg.field_dim();
  CMatrix op = CMatrix::Zero(size, size);
  for (int j = 0; j < n; ++j) {
    op += spec.eigenvector(j, m) * spec.eigenvector((j + n - 1) % n, m).adjoint();
  }
  return op;
}

double eigen_residual(const SpectralData& spec, const CMatrix& h0, int j, int m) {
  const CVector v = spec.eigenvector(j, m);
  return (h0 * v - spec.energy(m) * v).norm();
}

}  // namespace qrabi::model
