#include "qrabi/rwa_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qrabi/coherent_ops.hpp"
#include "qrabi/special_functions.hpp"

namespace qrabi::rwa {
namespace {

using model::sigma_power;
constexpr double kResonantPhaseTol = 1e-9;

void check_level(const ModelConfig& cfg, int m) {
  if (m < 0) throw std::domain_error("field level must be >= 0");
  if (cfg.algebra.kind == AlgebraSpec::Kind::SU2 && m > cfg.algebra.spin_2J) {
    throw std::domain_error("su(2) field level exceeds 2J");
  }
}

int wrap(int k, int n) {
  const int r = k % n;
  return r < 0 ? r + n : r;
}

}  // namespace

double kappa_abs(const ModelConfig& cfg) {
  const double arg = model::dressed_constants(cfg).C * std::sin(std::numbers::pi / cfg.n);
  switch (cfg.algebra.kind) {
    case AlgebraSpec::Kind::Oscillator:
      return arg;
    case AlgebraSpec::Kind::SU11:
      return std::sinh(arg);
    case AlgebraSpec::Kind::SU2:
      return std::sin(arg);
  }
  return arg;
}

double diagonal_factor(const ModelConfig& cfg, int m) {
  check_level(cfg, m);
  const double x = kappa_abs(cfg) * kappa_abs(cfg);
  switch (cfg.algebra.kind) {
    case AlgebraSpec::Kind::Oscillator:
      return std::exp(-0.5 * x) * special::laguerre_assoc(m, 0, x);
    case AlgebraSpec::Kind::SU11: {
      const double K = cfg.algebra.bargmann_K;
      const double ratio = std::exp(special::log_factorial(m) - special::log_pochhammer(2.0 * K, m));
      return ratio * std::pow(1.0 + x, -K - m) * special::f_su11(m, 0, x, 2.0 * K);
    }
    case AlgebraSpec::Kind::SU2: {
      const int twoJ = cfg.algebra.spin_2J;
      const double log_perm = special::log_factorial(twoJ) - special::log_factorial(twoJ - m);
      const double ratio = std::exp(special::log_factorial(m) - log_perm);
      return ratio * special::f_su2_weighted(m, 0, std::min(1.0, x), twoJ, 0.5 * twoJ - m);
    }
  }
  return 0.0;
}

double theta(const ModelConfig& cfg, int m, int j) {
  const double phase = cfg.delta_phase + 2.0 * std::numbers::pi * wrap(j, cfg.n) / cfg.n;
  return cfg.delta_abs * std::cos(phase) * diagonal_factor(cfg, m);
}

double offdiag_amplitude(const ModelConfig& cfg, int m, int r) {
  if (!(m < r)) throw std::domain_error("offdiag_amplitude: need m < r");
  check_level(cfg, m);
  check_level(cfg, r);
  const double x = kappa_abs(cfg) * kappa_abs(cfg);
  const int gap = r - m;
  switch (cfg.algebra.kind) {
    case AlgebraSpec::Kind::Oscillator: {
      const double ratio = std::exp(0.5 * (special::log_factorial(m) - special::log_factorial(r)));
      return ratio * std::exp(-0.5 * x) * special::laguerre_assoc(m, gap, x);
    }
    case AlgebraSpec::Kind::SU11: {
      const double K = cfg.algebra.bargmann_K;
      const double ratio =
          std::exp(0.5 * (special::log_factorial(r) + special::log_factorial(m) -
                          special::log_pochhammer(2.0 * K, r) - special::log_pochhammer(2.0 * K, m)));
      return ratio * std::pow(1.0 + x, -K - 0.5 * (r + m)) * special::f_su11(m, gap, x, 2.0 * K);
    }
    case AlgebraSpec::Kind::SU2: {
      const int twoJ = cfg.algebra.spin_2J;
      const double log_perm_r = special::log_factorial(twoJ) - special::log_factorial(twoJ - r);
      const double log_perm_m = special::log_factorial(twoJ) - special::log_factorial(twoJ - m);
      const double ratio = std::exp(
          0.5 * (special::log_factorial(r) + special::log_factorial(m) - log_perm_r - log_perm_m));
      return ratio * special::f_su2_weighted(m, gap, std::min(1.0, x), twoJ, 0.5 * twoJ - 0.5 * (r + m));
    }
  }
  return 0.0;
}

bool selection_rule(int n, int m, int r, int j, int j_prime) { return wrap(r - m + j_prime - j, n) == 0; }

cplx rabi_frequency(const ModelConfig& cfg, int m, int r, int j, int j_prime) {
  if (!(m < r)) throw std::domain_error("rabi_frequency: need m < r");
  const int n = cfg.n;
  if (j < 0 || j >= n || j_prime < 0 || j_prime >= n) throw std::out_of_range("rabi_frequency: atom index");
  check_level(cfg, m);
  check_level(cfg, r);
  if (!selection_rule(n, m, r, j, j_prime)) return {0.0, 0.0};

  const int gap = r - m;
  const cplx delta = cfg.delta();
  const double sign = gap % 2 == 0 ? 1.0 : -1.0;
  const cplx bracket = delta * sigma_power(n, j) + std::conj(delta) * sigma_power(n, -j_prime) * sign;
  cplx kappa_pow(1.0, 0.0);
  const cplx kappa(0.0, kappa_abs(cfg));
  for (int i = 0; i < gap; ++i) kappa_pow *= kappa;
  // sigma^{-(r-m)/2} on the principal branch sigma^{1/2} = e^{i pi/n}
  const cplx half_root = std::polar(1.0, -std::numbers::pi * gap / n);
  return bracket * offdiag_amplitude(cfg, m, r) * kappa_pow * half_root;
}

double resonance_residual(const ModelConfig& cfg, int m, int r, int j, int j_prime) {
  const double Omega = model::dressed_constants(cfg).Omega;
  return Omega * (m - r) + theta(cfg, m, j) - theta(cfg, r, j_prime);
}

std::optional<ResonanceSolution> resonance_solve(const ModelConfig& cfg, int m, int r, int j, int j_prime) {
  if (!(m < r)) throw std::domain_error("resonance_solve: need m < r");
  const double Omega = model::dressed_constants(cfg).Omega;
  const double fm = diagonal_factor(cfg, m);
  const double fr = diagonal_factor(cfg, r);
  const double two_pi_n = 2.0 * std::numbers::pi / cfg.n;
  const double bracket = std::cos(cfg.delta_phase + two_pi_n * wrap(j, cfg.n)) * fm -
                         std::cos(cfg.delta_phase + two_pi_n * wrap(j_prime, cfg.n)) * fr;
  const double scale = std::abs(fm) + std::abs(fr);
  if (!(bracket > 1e-14 * std::max(scale, 1e-300))) return std::nullopt;

  ResonanceSolution sol;
  sol.bracket = bracket;
  sol.delta_abs = Omega * (r - m) / bracket;
  ModelConfig solved = cfg;
  solved.delta_abs = sol.delta_abs;
  sol.residual = std::abs(resonance_residual(solved, m, r, j, j_prime));
  sol.delta_over_g = cfg.g > 0.0 ? sol.delta_abs / cfg.g : std::numeric_limits<double>::infinity();
  return sol;
}

std::vector<std::pair<int, int>> channel_enumerate(int n, int m, int r) {
  if (n < 1) throw std::invalid_argument("channel_enumerate: n must be >= 1");
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) out.emplace_back(wrap(j - (r - m), n), j);
  return out;
}

RabiChannel make_channel(const ModelConfig& cfg, int m, int r, int j, int j_prime) {
  RabiChannel c;
  c.m = m;
  c.r = r;
  c.j = j;
  c.j_prime = j_prime;
  c.R = rabi_frequency(cfg, m, r, j, j_prime);
  c.resonance_residual = std::abs(resonance_residual(cfg, m, r, j, j_prime));
  return c;
}

Eigen::Matrix2cd rwa_matrix(cplx R, double t) {
  const double mag = std::abs(R);
  Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
  if (mag == 0.0) return u;
  const double c = std::cos(0.5 * mag * t);
  const double s = std::sin(0.5 * mag * t);
  const cplx minus_i(0.0, -1.0);
  u(0, 0) = c;
  u(1, 1) = c;
  u(0, 1) = minus_i * (std::conj(R) / mag) * s;
  u(1, 0) = minus_i * (R / mag) * s;
  return u;
}

std::array<cplx, 2> rwa_two_level_evolve(cplx R, double t, const std::array<cplx, 2>& a0) {
  const Eigen::Matrix2cd u = rwa_matrix(R, t);
  return {u(0, 0) * a0[0] + u(0, 1) * a0[1], u(1, 0) * a0[0] + u(1, 1) * a0[1]};
}

std::vector<double> Trajectory::population(std::size_t label) const {
  std::vector<double> p;
  p.reserve(amplitudes.size());
  for (const CVector& a : amplitudes) p.push_back(std::norm(a(static_cast<Eigen::Index>(label))));
  return p;
}

ReducedSystem::ReducedSystem(const ModelConfig& cfg, std::vector<int> levels, Mode mode)
    : levels_(std::move(levels)) {
  cfg.validate();
  if (levels_.size() < 2) throw std::invalid_argument("reduced system needs at least two levels");
  if (!std::is_sorted(levels_.begin(), levels_.end()) ||
      std::adjacent_find(levels_.begin(), levels_.end()) != levels_.end()) {
    throw std::invalid_argument("reduced system levels must be strictly ascending");
  }
  for (int lv : levels_) check_level(cfg, lv);

  const int n = cfg.n;
  const model::DressedConstants dc = model::dressed_constants(cfg);
  Omega_ = dc.Omega;
  for (int lv : levels_) {
    for (int j = 0; j < n; ++j) labels_.push_back({lv, j});
  }
  const auto size = static_cast<Eigen::Index>(labels_.size());
  couplings_ = CMatrix::Zero(size, size);
  frequencies_ = Eigen::MatrixXd::Zero(size, size);

  // w_k = (z_k - z_{k-1}) / 2 with z_{-1} = z_{n-1}
  std::vector<cplx> w(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    w[static_cast<std::size_t>(k)] = 0.5 * dc.C * (sigma_power(n, k) - sigma_power(n, k - 1));
  }

  const cplx delta = cfg.delta();
  std::vector<double> thetas(labels_.size());
  for (std::size_t a = 0; a < labels_.size(); ++a) thetas[a] = theta(cfg, labels_[a].m, labels_[a].j);

  for (int m : levels_) {
    for (int r : levels_) {
      if (m == r) continue;
      std::vector<cplx> plus(static_cast<std::size_t>(n));
      std::vector<cplx> minus(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) {
        plus[static_cast<std::size_t>(k)] = coherent::matelem(cfg.algebra, m, r, w[static_cast<std::size_t>(k)]);
        minus[static_cast<std::size_t>(k)] = coherent::matelem(cfg.algebra, m, r, -w[static_cast<std::size_t>(k)]);
      }
      for (std::size_t a = 0; a < labels_.size(); ++a) {
        if (labels_[a].m != m) continue;
        const int j = labels_[a].j;
        for (std::size_t b = 0; b < labels_.size(); ++b) {
          if (labels_[b].m != r) continue;
          const int jp = labels_[b].j;
          cplx sum_plus(0.0, 0.0);
          cplx sum_minus(0.0, 0.0);
          for (int k = 0; k < n; ++k) {
            sum_plus += plus[static_cast<std::size_t>(k)] *
                        sigma_power(n, static_cast<long long>(k) * j - static_cast<long long>(k - 1) * jp);
            sum_minus += minus[static_cast<std::size_t>(k)] *
                         sigma_power(n, static_cast<long long>(k - 1) * j - static_cast<long long>(k) * jp);
          }
          const auto ia = static_cast<Eigen::Index>(a);
          const auto ib = static_cast<Eigen::Index>(b);
          couplings_(ia, ib) = (0.5 * delta * sum_plus + 0.5 * std::conj(delta) * sum_minus) / static_cast<double>(n);
          frequencies_(ia, ib) = Omega_ * (m - r) + thetas[a] - thetas[b];
        }
      }
    }
  }

  if (mode == Mode::RwaOnly) {
    for (Eigen::Index a = 0; a < size; ++a) {
      for (Eigen::Index b = 0; b < size; ++b) {
        if (std::abs(frequencies_(a, b)) > kResonantPhaseTol * Omega_) couplings_(a, b) = 0.0;
      }
    }
  }
}

CMatrix ReducedSystem::generator(double t) const {
  CMatrix g(couplings_.rows(), couplings_.cols());
  for (Eigen::Index a = 0; a < g.rows(); ++a) {
    for (Eigen::Index b = 0; b < g.cols(); ++b) {
      g(a, b) = couplings_(a, b) == cplx(0.0, 0.0) ? cplx(0.0, 0.0)
                                                    : std::polar(1.0, t * frequencies_(a, b)) * couplings_(a, b);
    }
  }
  return g;
}

namespace {

struct Rk4Run {
  std::vector<CVector> states;
  double norm_drift = 0.0;
};

Rk4Run run_rk4(const ReducedSystem& sys, const std::vector<double>& grid, const CVector& a0, int substeps) {
  const cplx minus_i(0.0, -1.0);
  auto rhs = [&](double t, const CVector& a) -> CVector { return minus_i * (sys.generator(t) * a); };
  Rk4Run run;
  run.states.reserve(grid.size());
  CVector a = a0;
  const double norm0 = a0.squaredNorm();
  run.states.push_back(a);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double h = (grid[i + 1] - grid[i]) / substeps;
    double t = grid[i];
    for (int s = 0; s < substeps; ++s) {
      const CVector k1 = rhs(t, a);
      const CVector k2 = rhs(t + 0.5 * h, a + 0.5 * h * k1);
      const CVector k3 = rhs(t + 0.5 * h, a + 0.5 * h * k2);
      const CVector k4 = rhs(t + h, a + h * k3);
      a += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t = grid[i] + (s + 1) * h;
    }
    run.norm_drift = std::max(run.norm_drift, std::abs(a.squaredNorm() - norm0));
    run.states.push_back(a);
  }
  return run;
}

double max_difference(const std::vector<CVector>& a, const std::vector<CVector>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, (a[i] - b[i]).cwiseAbs().maxCoeff());
  return worst;
}

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("time grid is empty");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid[i + 1] > grid[i])) throw std::invalid_argument("time grid must be strictly ascending");
  }
}

}  // namespace

double max_rabi_over_omega(const ModelConfig& cfg, const std::vector<int>& levels) {
  const double Omega = model::dressed_constants(cfg).Omega;
  double worst = 0.0;
  for (std::size_t a = 0; a < levels.size(); ++a) {
    for (std::size_t b = a + 1; b < levels.size(); ++b) {
      const int m = std::min(levels[a], levels[b]);
      const int r = std::max(levels[a], levels[b]);
      for (const auto& [jp, j] : channel_enumerate(cfg.n, m, r)) {
        worst = std::max(worst, std::abs(rabi_frequency(cfg, m, r, j, jp)) / Omega);
      }
    }
  }
  return worst;
}

Trajectory integrate_reduced(const ModelConfig& cfg, const std::vector<int>& levels,
                             const std::vector<double>& t_grid, const CVector& a0, Mode mode,
                             const IntegratorOptions& opts) {
  check_grid(t_grid);
  const ReducedSystem sys(cfg, levels, mode);
  if (a0.size() != static_cast<Eigen::Index>(sys.labels().size())) {
    throw std::invalid_argument("integrate_reduced: a0 must have n * |levels| entries");
  }

  Trajectory traj;
  traj.times = t_grid;
  traj.labels = sys.labels();
  traj.delta_over_g = cfg.g > 0.0 ? cfg.delta_abs / cfg.g : std::numeric_limits<double>::infinity();
  traj.rabi_over_omega = max_rabi_over_omega(cfg, levels);

  if (t_grid.size() == 1) {
    traj.amplitudes = {a0};
    return traj;
  }

  int substeps = std::max(1, opts.initial_substeps);
  Rk4Run coarse = run_rk4(sys, t_grid, a0, substeps);
  const auto intervals = static_cast<long long>(t_grid.size() - 1);
  double diff = std::numeric_limits<double>::infinity();
  while (true) {
    const int finer = 2 * substeps;
    if (static_cast<long long>(finer) * intervals > opts.max_total_steps) {
      throw IntegrationError("integrate_reduced: step refinement limit reached before tolerance", diff);
    }
    Rk4Run fine = run_rk4(sys, t_grid, a0, finer);
    diff = max_difference(coarse.states, fine.states);
    substeps = finer;
    coarse = std::move(fine);
    if (diff < opts.tol) break;
  }
  traj.amplitudes = std::move(coarse.states);
  traj.norm_drift = coarse.norm_drift;
  traj.error_estimate = diff;
  traj.substeps = substeps;
  return traj;
}

CVector full_state(const model::SpectralData& spec, const std::vector<int>& levels, const CVector& amplitudes) {
  const int n = spec.cfg.n;
  if (amplitudes.size() != static_cast<Eigen::Index>(levels.size()) * n) {
    throw std::invalid_argument("full_state: amplitude count must be n * |levels|");
  }
  CVector psi = CVector::Zero(static_cast<Eigen::Index>(n) * spec.cfg.field_dim());
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const std::vector<CVector> cats = model::multi_cat_states(spec, levels[l]);
    for (int j = 0; j < n; ++j) {
      psi += amplitudes(static_cast<Eigen::Index>(l) * n + j) * cats[static_cast<std::size_t>(j)];
    }
  }
  return psi;
}

Trajectory integrate_full(const ModelConfig& cfg, const std::vector<double>& t_grid, const CVector& psi0,
                          const std::vector<int>& levels) {
  check_grid(t_grid);
  const model::SpectralData spec = model::spectral_data(cfg);
  const CMatrix h = model::build_hamiltonian(cfg).matrix;
  if (psi0.size() != h.rows()) throw std::invalid_argument("integrate_full: psi0 has wrong dimension");
  for (int lv : levels) check_level(cfg, lv);

  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
  if (eig.info() != Eigen::Success) throw std::runtime_error("integrate_full: eigensolver failed");
  const CMatrix& v = eig.eigenvectors();
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const CVector coeffs = v.adjoint() * psi0;

  const int n = cfg.n;
  Trajectory traj;
  traj.times = t_grid;
  std::vector<CVector> cats;
  std::vector<double> phase_rate;  // E_m + Theta_{m,j}
  for (int lv : levels) {
    const std::vector<CVector> c = model::multi_cat_states(spec, lv);
    for (int j = 0; j < n; ++j) {
      traj.labels.push_back({lv, j});
      cats.push_back(c[static_cast<std::size_t>(j)]);
      phase_rate.push_back(spec.energy(lv) + theta(cfg, lv, j));
    }
  }
  traj.delta_over_g = cfg.g > 0.0 ? cfg.delta_abs / cfg.g : std::numeric_limits<double>::infinity();
  traj.rabi_over_omega = levels.size() >= 2 ? max_rabi_over_omega(cfg, levels) : 0.0;

  const double norm0 = psi0.squaredNorm();
  for (double t : t_grid) {
    CVector rotated(coeffs.size());
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) rotated(i) = std::polar(1.0, -lambda(i) * t) * coeffs(i);
    const CVector psi = v * rotated;
    traj.norm_drift = std::max(traj.norm_drift, std::abs(psi.squaredNorm() - norm0));
    CVector amps(static_cast<Eigen::Index>(cats.size()));
    for (std::size_t a = 0; a < cats.size(); ++a) {
      amps(static_cast<Eigen::Index>(a)) = std::polar(1.0, t * phase_rate[a]) * cats[a].dot(psi);
    }
    traj.amplitudes.push_back(std::move(amps));
  }
  return traj;
}

double population_frequency(const std::vector<double>& times, const std::vector<double>& population) {
  if (times.size() != population.size()) throw std::invalid_argument("population_frequency: size mismatch");
  std::vector<double> crossings;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double a = population[i] - 0.5;
    const double b = population[i + 1] - 0.5;
    if (a == 0.0) {
      crossings.push_back(times[i]);
    } else if (a * b < 0.0) {
      crossings.push_back(times[i] + (times[i + 1] - times[i]) * a / (a - b));
    }
  }
  if (crossings.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double spacing = (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
  return std::numbers::pi / spacing;
}

std::vector<double> uniform_grid(double start, double stop, int steps) {
  if (steps < 1 || !(stop > start)) throw std::invalid_argument("uniform_grid: need steps >= 1 and stop > start");
  std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) grid[static_cast<std::size_t>(i)] = start + (stop - start) * i / steps;
  return grid;
}

}  // namespace qrabi::rwa
