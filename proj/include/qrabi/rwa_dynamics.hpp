#pragma once

// Interaction-picture dynamics of the strong-coupling model: the diagonal
// phases Theta_{m,j}, complex Rabi frequencies, the resonance condition, the
// two-level rotating-wave solution and integrators for the reduced amplitude
// equations and the full Schrodinger equation.

#include <array>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qrabi/nlevel_model.hpp"

namespace qrabi::rwa {

using model::ModelConfig;

struct RabiChannel {
  int m = 0;
  int r = 1;
  int j = 0;
  int j_prime = 0;
  cplx R;
  double resonance_residual = 0.0;
};

/// |kappa| entering Theta and R: C sin(pi/n), sinh(C sin(pi/n)) or sin(C sin(pi/n)).
double kappa_abs(const ModelConfig& cfg);

/// <m| e^{(1/2)((z_j - z_{j-1}) L+ - h.c.)} |m>, the same for every j (real).
double diagonal_factor(const ModelConfig& cfg, int m);

/// Theta_{m,j} = Re(Delta sigma^j) f_m.
double theta(const ModelConfig& cfg, int m, int j);

/// Algebra-specific amplitude G_{m,r} (no kappa^{r-m} factor), m < r.
double offdiag_amplitude(const ModelConfig& cfg, int m, int r);

/// True iff (r - m + j' - j) = 0 mod n.
bool selection_rule(int n, int m, int r, int j, int j_prime);

/// Closed-form R_{j',j}; exactly 0 when the selection rule fails.
cplx rabi_frequency(const ModelConfig& cfg, int m, int r, int j, int j_prime);

/// Omega (m - r) + Theta_{m,j} - Theta_{r,j'}.
double resonance_residual(const ModelConfig& cfg, int m, int r, int j, int j_prime);

struct ResonanceSolution {
  double delta_abs = 0.0;
  double residual = 0.0;
  double delta_over_g = 0.0;
  double bracket = 0.0;
};

/// Solves |Delta| [cos(phi + 2 pi j/n) f_m - cos(phi + 2 pi j'/n) f_r] = Omega (r - m)
/// at the configured phase; empty when no positive |Delta| exists.
std::optional<ResonanceSolution> resonance_solve(const ModelConfig& cfg, int m, int r, int j, int j_prime);

/// The n pairs (j', j) with j' - j + r - m = 0 mod n, ordered by j.
std::vector<std::pair<int, int>> channel_enumerate(int n, int m, int r);

RabiChannel make_channel(const ModelConfig& cfg, int m, int r, int j, int j_prime);

/// [[cos, -i conj(R)/|R| sin], [-i R/|R| sin, cos]] at angle |R| t / 2.
Eigen::Matrix2cd rwa_matrix(cplx R, double t);
std::array<cplx, 2> rwa_two_level_evolve(cplx R, double t, const std::array<cplx, 2>& a0);

enum class Mode { FullTerms, RwaOnly };

struct AmplitudeLabel {
  int m = 0;
  int j = 0;
  friend bool operator==(const AmplitudeLabel&, const AmplitudeLabel&) = default;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<AmplitudeLabel> labels;
  std::vector<CVector> amplitudes;  // one vector per time, ordered as labels
  double norm_drift = 0.0;
  double error_estimate = 0.0;
  int substeps = 0;  // RK4 steps per grid interval actually used (0 for spectral propagation)
  double delta_over_g = 0.0;
  double rabi_over_omega = 0.0;

  std::vector<double> population(std::size_t label) const;
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

/// Amplitude equations i da/dt = G(t) a on the labels (level, j), level-major.
/// G_ab(t) = e^{i t nu_ab} M_ab with nu_ab = Omega(m - r) + Theta_{m,j} - Theta_{r,j'}.
class ReducedSystem {
 public:
  ReducedSystem(const ModelConfig& cfg, std::vector<int> levels, Mode mode);

  const std::vector<AmplitudeLabel>& labels() const { return labels_; }
  const CMatrix& couplings() const { return couplings_; }
  const Eigen::MatrixXd& frequencies() const { return frequencies_; }
  CMatrix generator(double t) const;
  double Omega() const { return Omega_; }

 private:
  std::vector<int> levels_;
  std::vector<AmplitudeLabel> labels_;
  CMatrix couplings_;
  Eigen::MatrixXd frequencies_;
  double Omega_ = 0.0;
};

struct IntegratorOptions {
  double tol = 1e-10;
  int initial_substeps = 4;
  long long max_total_steps = 40'000'000;
};

Trajectory integrate_reduced(const ModelConfig& cfg, const std::vector<int>& levels,
                             const std::vector<double>& t_grid, const CVector& a0, Mode mode,
                             const IntegratorOptions& opts = {});

/// Full-space state sum_{m in levels, j} amp(m,j) |{sigma^j, psi_m}>.
CVector full_state(const model::SpectralData& spec, const std::vector<int>& levels, const CVector& amplitudes);

/// Exact propagation of i dPsi/dt = H Psi; returns the interaction-picture
/// amplitudes a_{m,j}(t) = e^{it(E_m + Theta_{m,j})} <{sigma^j, psi_m}|Psi(t)>.
Trajectory integrate_full(const ModelConfig& cfg, const std::vector<double>& t_grid, const CVector& psi0,
                          const std::vector<int>& levels);

/// Angular frequency of p(t) = cos^2(w t / 2) read off the mean spacing of
/// the crossings of p = 1/2. NaN with fewer than two crossings.
double population_frequency(const std::vector<double>& times, const std::vector<double>& population);

/// max |R| / Omega over resonant channels between every pair of levels.
double max_rabi_over_omega(const ModelConfig& cfg, const std::vector<int>& levels);

std::vector<double> uniform_grid(double start, double stop, int steps);

}  // namespace qrabi::rwa
