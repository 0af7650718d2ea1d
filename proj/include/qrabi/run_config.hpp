#pragma once

// JSON run configuration for the qudit-rabi tool. Parsing is strict (unknown
// keys are rejected) and to_json emits the canonical form, so
// parse(to_json(c)) == c.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qrabi/nlevel_model.hpp"

namespace qrabi::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TimeGrid {
  double start = 0.0;
  std::optional<double> stop;  // when absent: start + periods * 2 pi / |R|
  double periods = 2.0;
  int steps = 400;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

struct CommandParams {
  // matelem
  std::vector<cplx> z_values{cplx(0.3, 0.0)};
  int max_index = 8;
  int oracle_dim = 0;  // 0: use trunc_dim

  // verify
  int check_levels = -1;  // -1: field_dim / 4

  // rabi, simulate
  int m = 0;
  int r = 1;
  int j = 0;
  std::optional<int> j_prime;  // default from the selection rule
  bool solve_resonance = false;
  std::vector<int> levels;     // default {m, r}
  TimeGrid time;
  std::string integrator = "reduced";  // reduced | full | both
  std::string mode = "rwa_only";       // rwa_only | full_terms
  double integrator_tol = 1e-10;
  double frequency_tol = 0.1;

  // gates
  std::vector<double> durations;  // empty: quarter and half swap times pi/(2|R|), pi/|R|
  std::string target = "planted"; // planted | controlled_shift
  std::vector<int> planted{0, 1};
  int max_depth = 2;
  int beam_width = 64;
  std::string convention = "control_second";  // control_second | control_first
  double min_fidelity = 0.999;

  std::optional<double> tol;

  friend bool operator==(const CommandParams&, const CommandParams&) = default;
};

struct RunConfig {
  model::ModelConfig model;
  // list-valued fields; empty means the scalar in model is used
  std::vector<double> omega_sweep;
  std::vector<double> g_sweep;
  std::vector<double> delta_abs_sweep;
  CommandParams command;
  std::uint64_t seed = 0;

  bool is_sweep() const { return !omega_sweep.empty() || !g_sweep.empty() || !delta_abs_sweep.empty(); }
  /// Scalar configs for every sweep point, omega outermost, then g, then |Delta|.
  std::vector<RunConfig> expand() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);
nlohmann::ordered_json to_json(const RunConfig& cfg);

}  // namespace qrabi::cli
