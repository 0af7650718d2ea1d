#include "qrabi/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "qrabi/coherent_ops.hpp"
#include "qrabi/qudit_gates.hpp"
#include "qrabi/rwa_dynamics.hpp"
#include "qrabi/svg_plot.hpp"

namespace qrabi::cli {
namespace {

using nlohmann::ordered_json;

class Checks {
 public:
  void add(const std::string& name, double deviation, double tolerance) {
    const bool ok = std::isfinite(deviation) && deviation <= tolerance;
    ordered_json c;
    c["name"] = name;
    c["deviation"] = deviation;
    c["tolerance"] = tolerance;
    c["pass"] = ok;
    list_.push_back(c);
    all_ok_ = all_ok_ && ok;
  }
  bool all_ok() const { return all_ok_; }
  const ordered_json& json() const { return list_; }

 private:
  ordered_json list_ = ordered_json::array();
  bool all_ok_ = true;
};

double pick_tol(const RunOptions& opts, const CommandParams& p, double fallback) {
  if (opts.tol) return *opts.tol;
  if (p.tol) return *p.tol;
  return fallback;
}

ordered_json complex_json(cplx z) { return ordered_json::array({z.real(), z.imag()}); }

void finish(CommandOutput& out, const Checks& checks) {
  out.report["checks"] = checks.json();
  out.report["pass"] = checks.all_ok();
  out.status = checks.all_ok() ? kPass : kCheckFailed;
}

int wrap_index(int k, int n) {
  const int r = k % n;
  return r < 0 ? r + n : r;
}

// ---- matelem -------------------------------------------------------------

void cmd_matelem(const RunConfig& cfg, const RunOptions& opts, CommandOutput& out) {
  const model::ModelConfig& mc = cfg.model;
  const CommandParams& p = cfg.command;
  const AlgebraSpec& alg = mc.algebra;
  const double tol = pick_tol(opts, p, alg.truncated() ? 1e-8 : 1e-10);
  const int dim = alg.truncated() ? (p.oracle_dim > 0 ? p.oracle_dim : mc.trunc_dim) : alg.spin_2J + 1;
  const int top = alg.truncated() ? p.max_index : std::min(p.max_index, alg.spin_2J);
  if (alg.truncated() && dim <= top) throw ConfigError("oracle dimension must exceed max_index");

  std::ostringstream csv;
  csv << "z_re,z_im,n,m,re,im,oracle_re,oracle_im,abs_diff\n";
  double worst = 0.0;
  ordered_json per_z = ordered_json::array();
  for (cplx z : p.z_values) {
    const CMatrix numeric = displacement_numeric(alg, dim, z);
    double z_worst = 0.0;
    for (int n = 0; n <= top; ++n) {
      for (int m = 0; m <= top; ++m) {
        const cplx closed = coherent::matelem(alg, n, m, z);
        const cplx oracle = numeric(n, m);
        const double diff = std::abs(closed - oracle);
        z_worst = std::max(z_worst, diff);
        csv << format_double(z.real()) << ',' << format_double(z.imag()) << ',' << n << ',' << m << ','
            << format_double(closed.real()) << ',' << format_double(closed.imag()) << ','
            << format_double(oracle.real()) << ',' << format_double(oracle.imag()) << ',' << format_double(diff)
            << '\n';
      }
    }
    per_z.push_back({{"z", complex_json(z)}, {"max_abs_diff", z_worst}});
    worst = std::max(worst, z_worst);
  }
  out.report["oracle_dim"] = dim;
  out.report["max_index"] = top;
  out.report["per_z"] = per_z;
  out.files.emplace_back("matelem.csv", csv.str());
  Checks checks;
  checks.add("closed_form_vs_oracle", worst, tol);
  finish(out, checks);
}

// ---- verify --------------------------------------------------------------

void cmd_verify(const RunConfig& cfg, const RunOptions& opts, CommandOutput& out) {
  const model::ModelConfig& mc = cfg.model;
  const CommandParams& p = cfg.command;
  const bool exact = !mc.algebra.truncated();
  const int n = mc.n;
  const int dim = mc.field_dim();
  const int levels = std::min(dim - 1, p.check_levels >= 0 ? p.check_levels : dim / 4);
  auto tol = [&](double fallback) { return pick_tol(opts, p, fallback); };

  Checks checks;
  checks.add("hadamard_diagonalization", model::diagonalization_check(n), tol(1e-12));

  double key = 0.0;
  int block = 0;
  for (int j = 0; j < n; ++j) {
    const model::KeyFormulaReport rep = model::key_formula_check(mc, j);
    key = std::max(key, rep.deviation);
    block = rep.block;
  }
  checks.add("key_formula", key, tol(exact ? 1e-12 : 1e-8));

  const model::SpectralData spec = model::spectral_data(mc);
  const CMatrix h0 = model::build_h0(mc);
  double residual = 0.0;
  double spread = 0.0;
  double ortho = 0.0;
  double hop = 0.0;
  for (int m = 0; m <= levels; ++m) {
    for (int j = 0; j < n; ++j) {
      residual = std::max(residual, model::eigen_residual(spec, h0, j, m));
      const CVector v = spec.eigenvector(j, m);
      spread = std::max(spread, std::abs(v.dot(h0 * v).real() - spec.energy(m)));
    }
    const std::vector<CVector> cats = model::multi_cat_states(spec, m);
    CMatrix c(cats.front().size(), n);
    for (int j = 0; j < n; ++j) c.col(j) = cats[static_cast<std::size_t>(j)];
    ortho = std::max(ortho, max_abs_diff(c.adjoint() * c, CMatrix::Identity(n, n)));
    CMatrix expected = CMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j) expected(j, j) = model::sigma_power(n, j);
    hop = std::max(hop, max_abs_diff(c.adjoint() * model::atom_hopping_operator(spec, m) * c, expected));
  }
  checks.add("eigen_residual", residual, tol(1e-8));
  checks.add("degeneracy_across_j", spread, tol(1e-9));
  checks.add("multicat_orthonormality", ortho, tol(1e-10));
  checks.add("hopping_diagonal_in_multicat_basis", hop, tol(1e-9));

  out.report["field_dim"] = dim;
  out.report["key_formula_block"] = block;
  out.report["levels_checked"] = levels + 1;
  out.report["Omega"] = spec.Omega;
  out.report["C"] = spec.C;
  finish(out, checks);
}

// ---- rabi ----------------------------------------------------------------

void cmd_rabi(const RunConfig& cfg, const RunOptions& opts, CommandOutput& out) {
  const model::ModelConfig& mc = cfg.model;
  const CommandParams& p = cfg.command;
  if (!(p.m < p.r)) throw ConfigError("rabi needs command.m < command.r");
  const double tol = pick_tol(opts, p, 1e-10);
  const double Omega = model::dressed_constants(mc).Omega;

  std::ostringstream csv;
  csv << "j,j_prime,delta_abs,R_re,R_im,R_abs,delta_over_g,rabi_over_omega,residual\n";
  ordered_json rows = ordered_json::array();
  double worst_residual = 0.0;
  for (const auto& [jp, j] : rwa::channel_enumerate(mc.n, p.m, p.r)) {
    const auto sol = rwa::resonance_solve(mc, p.m, p.r, j, jp);
    model::ModelConfig solved = mc;
    if (sol) solved.delta_abs = sol->delta_abs;
    const cplx R = rwa::rabi_frequency(solved, p.m, p.r, j, jp);
    ordered_json row;
    row["j"] = j;
    row["j_prime"] = jp;
    row["delta_abs"] = sol ? ordered_json(sol->delta_abs) : ordered_json(nullptr);
    row["R"] = complex_json(R);
    row["R_abs"] = std::abs(R);
    row["delta_over_g"] = sol ? ordered_json(sol->delta_over_g) : ordered_json(nullptr);
    row["rabi_over_omega"] = std::abs(R) / Omega;
    row["residual"] = sol ? ordered_json(sol->residual) : ordered_json(nullptr);
    rows.push_back(row);
    if (sol) worst_residual = std::max(worst_residual, sol->residual);
    csv << j << ',' << jp << ',' << (sol ? format_double(sol->delta_abs) : "null") << ','
        << format_double(R.real()) << ',' << format_double(R.imag()) << ',' << format_double(std::abs(R)) << ','
        << (sol ? format_double(sol->delta_over_g) : "null") << ',' << format_double(std::abs(R) / Omega) << ','
        << (sol ? format_double(sol->residual) : "null") << '\n';
  }
  out.report["Omega"] = Omega;
  out.report["channels"] = rows;
  out.files.emplace_back("channels.csv", csv.str());
  Checks checks;
  checks.add("resonance_residual", worst_residual, tol);
  finish(out, checks);
}

// ---- simulate ------------------------------------------------------------

std::string trajectory_csv(const rwa::Trajectory& tr) {
  std::ostringstream csv;
  csv << 't';
  for (const auto& l : tr.labels) csv << ",re_a_" << l.m << '_' << l.j << ",im_a_" << l.m << '_' << l.j;
  for (const auto& l : tr.labels) csv << ",pop_" << l.m << '_' << l.j;
  csv << ",norm\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const CVector& a = tr.amplitudes[i];
    csv << format_double(tr.times[i]);
    for (Eigen::Index k = 0; k < a.size(); ++k) csv << ',' << format_double(a(k).real()) << ',' << format_double(a(k).imag());
    for (Eigen::Index k = 0; k < a.size(); ++k) csv << ',' << format_double(std::norm(a(k)));
    csv << ',' << format_double(a.squaredNorm()) << '\n';
  }
  return csv.str();
}

void cmd_simulate(const RunConfig& cfg, const RunOptions& opts, CommandOutput& out) {
  const CommandParams& p = cfg.command;
  model::ModelConfig mc = cfg.model;
  const int n = mc.n;
  if (!(p.m < p.r)) throw ConfigError("simulate needs command.m < command.r");
  if (p.j < 0 || p.j >= n) throw ConfigError("command.j must lie in [0, n)");
  const int jp = p.j_prime ? *p.j_prime : wrap_index(p.j - (p.r - p.m), n);
  if (jp < 0 || jp >= n) throw ConfigError("command.j_prime must lie in [0, n)");
  std::vector<int> levels = p.levels.empty() ? std::vector<int>{p.m, p.r} : p.levels;
  const auto pos_m = std::find(levels.begin(), levels.end(), p.m);
  if (pos_m == levels.end() || std::find(levels.begin(), levels.end(), p.r) == levels.end()) {
    throw ConfigError("command.levels must contain m and r");
  }

  if (p.solve_resonance) {
    const auto sol = rwa::resonance_solve(mc, p.m, p.r, p.j, jp);
    if (!sol) throw ConfigError("no positive |Delta| satisfies the resonance condition for this channel");
    mc.delta_abs = sol->delta_abs;
  }
  const double Omega = model::dressed_constants(mc).Omega;
  const cplx R = rwa::rabi_frequency(mc, p.m, p.r, p.j, jp);
  double stop = 0.0;
  if (p.time.stop) {
    stop = *p.time.stop;
  } else {
    if (std::abs(R) == 0.0) throw ConfigError("|R| = 0 for this channel; give command.time.stop explicitly");
    stop = p.time.start + p.time.periods * 2.0 * std::numbers::pi / std::abs(R);
  }
  const std::vector<double> grid = rwa::uniform_grid(p.time.start, stop, p.time.steps);

  const std::size_t start_label = static_cast<std::size_t>(pos_m - levels.begin()) * n + p.j;
  CVector a0 = CVector::Zero(static_cast<Eigen::Index>(levels.size()) * n);
  a0(static_cast<Eigen::Index>(start_label)) = 1.0;

  ordered_json channel;
  channel["m"] = p.m;
  channel["r"] = p.r;
  channel["j"] = p.j;
  channel["j_prime"] = jp;
  channel["delta_abs"] = mc.delta_abs;
  channel["R"] = complex_json(R);
  channel["R_abs"] = std::abs(R);
  channel["Omega"] = Omega;
  channel["resonance_residual"] = std::abs(rwa::resonance_residual(mc, p.m, p.r, p.j, jp));
  out.report["channel"] = channel;

  std::vector<std::pair<std::string, rwa::Trajectory>> runs;
  if (p.integrator != "full") {
    rwa::IntegratorOptions io;
    io.tol = p.integrator_tol;
    const rwa::Mode mode = p.mode == "rwa_only" ? rwa::Mode::RwaOnly : rwa::Mode::FullTerms;
    runs.emplace_back("reduced", rwa::integrate_reduced(mc, levels, grid, a0, mode, io));
  }
  if (p.integrator != "reduced") {
    const model::SpectralData spec = model::spectral_data(mc);
    runs.emplace_back("full", rwa::integrate_full(mc, grid, rwa::full_state(spec, levels, a0), levels));
  }

  Checks checks;
  const double norm_tol = pick_tol(opts, p, 1e-8);
  ordered_json traj_reports = ordered_json::array();
  std::vector<plot::Series> series;
  for (const auto& [name, tr] : runs) {
    const double freq = rwa::population_frequency(tr.times, tr.population(start_label));
    const double rel = std::abs(freq - std::abs(R)) / std::abs(R);
    ordered_json t;
    t["integrator"] = name;
    if (name == "reduced") t["mode"] = p.mode;
    t["norm_drift"] = tr.norm_drift;
    t["error_estimate"] = tr.error_estimate;
    t["substeps"] = tr.substeps;
    t["delta_over_g"] = tr.delta_over_g;
    t["rabi_over_omega"] = tr.rabi_over_omega;
    t["strong_coupling"] = mc.strong_coupling();
    t["population_frequency"] = std::isfinite(freq) ? ordered_json(freq) : ordered_json(nullptr);
    t["frequency_rel_error"] = std::isfinite(rel) ? ordered_json(rel) : ordered_json(nullptr);
    traj_reports.push_back(t);

    checks.add(name + "_norm_drift", tr.norm_drift, norm_tol);
    if (std::isfinite(rel)) checks.add(name + "_frequency_vs_R", rel, p.frequency_tol);

    const std::string file = runs.size() > 1 && name == "full" ? "trajectory_full.csv" : "trajectory.csv";
    out.files.emplace_back(file, trajectory_csv(tr));
    for (std::size_t k = 0; k < tr.labels.size(); ++k) {
      std::ostringstream label;
      label << (runs.size() > 1 ? name + " " : "") << "|a_" << tr.labels[k].m << ',' << tr.labels[k].j << "|^2";
      series.push_back({label.str(), tr.population(k)});
    }
  }
  out.report["trajectories"] = traj_reports;
  if (opts.svg) {
    plot::PlotSpec ps;
    ps.title = "populations, " + mc.algebra.name() + ", n = " + std::to_string(n);
    ps.y_label = "population";
    out.files.emplace_back("plot.svg", plot::svg_line_plot(grid, series, ps));
  }
  finish(out, checks);
}

// ---- gates ---------------------------------------------------------------

ordered_json matrix_json(const CMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_json(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

void cmd_gates(const RunConfig& cfg, const RunOptions& opts, CommandOutput& out) {
  const model::ModelConfig& mc = cfg.model;
  const CommandParams& p = cfg.command;
  const int n = mc.n;
  std::vector<int> levels = p.levels;
  if (levels.empty()) {
    for (int k = 0; k < n; ++k) levels.push_back(k);
  }
  const std::vector<gates::GeneratorSlot> slots = gates::enumerate_generators(n, levels);
  const double tol = pick_tol(opts, p, 1e-10);

  std::vector<gates::GateSetEntry> gate_set;
  ordered_json gens = ordered_json::array();
  double defect = 0.0;
  for (const gates::GeneratorSlot& s : slots) {
    const int m = levels[static_cast<std::size_t>(s.level_index_k)];
    const int r = levels[static_cast<std::size_t>(s.level_index_l)];
    gates::GateSetEntry e;
    e.level_index_k = s.level_index_k;
    e.level_index_l = s.level_index_l;
    e.channel = rwa::make_channel(mc, m, r, s.j, s.j_prime);
    const double mag = std::abs(e.channel.R);
    e.durations = !p.durations.empty() ? p.durations
                  : mag > 0.0          ? std::vector<double>{0.5 * std::numbers::pi / mag, std::numbers::pi / mag}
                                       : std::vector<double>{0.0};
    ordered_json g;
    g["level_index_k"] = s.level_index_k;
    g["level_index_l"] = s.level_index_l;
    g["m"] = m;
    g["r"] = r;
    g["j"] = s.j;
    g["j_prime"] = s.j_prime;
    g["R"] = complex_json(e.channel.R);
    g["durations"] = e.durations;
    double gen_defect = 0.0;
    for (double t : e.durations) {
      const gates::EmbeddedGate eg = gates::make_embedded(n, s.level_index_k, s.level_index_l, e.channel, t);
      gen_defect = std::max({gen_defect, unitarity_defect(eg.unitary.matrix_2n), unitarity_defect(eg.matrix)});
    }
    g["unitarity_defect"] = gen_defect;
    if (n <= 4) g["matrix_2n"] = matrix_json(gates::elementary_unitary(n, e.channel, e.durations.front()).matrix_2n);
    defect = std::max(defect, gen_defect);
    gens.push_back(g);
    gate_set.push_back(std::move(e));
  }

  const gates::ShiftConvention conv = p.convention == "control_first" ? gates::ShiftConvention::ControlFirst
                                                                      : gates::ShiftConvention::ControlSecond;
  const CMatrix shift = gates::controlled_shift_target(n, conv);
  CMatrix power = CMatrix::Identity(n * n, n * n);
  for (int k = 0; k < n; ++k) power = shift * power;
  const double shift_dev = max_abs_diff(power, CMatrix::Identity(n * n, n * n));

  // flat element list in gate-set order, as the search sees it
  std::vector<gates::EmbeddedGate> elements;
  for (const gates::GateSetEntry& e : gate_set) {
    for (double t : e.durations) elements.push_back(gates::make_embedded(n, e.level_index_k, e.level_index_l, e.channel, t));
  }
  CMatrix target;
  if (p.target == "planted") {
    target = CMatrix::Identity(n * n, n * n);
    for (int idx : p.planted) {
      if (idx < 0 || idx >= static_cast<int>(elements.size())) throw ConfigError("command.planted index out of range");
      target = elements[static_cast<std::size_t>(idx)].matrix * target;
    }
  } else {
    target = shift;
  }
  gates::SynthesisOptions so;
  so.beam_width = p.beam_width;
  so.seed = cfg.seed;
  const gates::SynthesisResult syn = gates::synthesize(target, n, gate_set, p.max_depth, so);
  defect = std::max(defect, unitarity_defect(syn.sequence.product()));

  ordered_json seq = ordered_json::array();
  for (const gates::EmbeddedGate& g : syn.sequence.gates()) {
    seq.push_back({{"level_index_k", g.level_index_k},
                   {"level_index_l", g.level_index_l},
                   {"j", g.unitary.channel.j},
                   {"j_prime", g.unitary.channel.j_prime},
                   {"t", g.unitary.t}});
  }
  ordered_json synth;
  synth["target"] = p.target;
  if (p.target == "planted") synth["planted"] = p.planted;
  synth["seed"] = cfg.seed;
  synth["max_depth"] = p.max_depth;
  synth["beam_width"] = p.beam_width;
  synth["elements"] = elements.size();
  synth["fidelity"] = syn.fidelity;
  synth["depth"] = syn.sequence.size();
  synth["sequence"] = seq;
  synth["candidates_scored"] = syn.candidates_scored;

  out.report["levels"] = levels;
  out.report["elementary_count"] = gates::elementary_count(n);
  out.report["generators_enumerated"] = slots.size();
  out.report["generators"] = gens;
  out.report["controlled_shift"] = {{"convention", p.convention}, {"power_n_deviation", shift_dev}};
  out.report["synthesis"] = synth;

  Checks checks;
  checks.add("elementary_count", std::abs(static_cast<double>(slots.size()) - gates::elementary_count(n)), 0.0);
  checks.add("unitarity", defect, tol);
  checks.add("controlled_shift_power_n", shift_dev, opts.tol ? *opts.tol : 1e-12);
  if (p.target == "planted") checks.add("synthesis_fidelity", 1.0 - syn.fidelity, 1.0 - p.min_fidelity);
  finish(out, checks);
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"matelem", "verify", "rabi", "simulate", "gates"};
  return names;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CommandOutput run_command(const std::string& command, const RunConfig& cfg, const RunOptions& opts) {
  CommandOutput out;
  out.report["command"] = command;
  out.report["config"] = to_json(cfg);
  try {
    if (cfg.is_sweep()) throw ConfigError("run_command needs a scalar config; use run_sweep");
    cfg.model.validate();
    if (command == "matelem") {
      cmd_matelem(cfg, opts, out);
    } else if (command == "verify") {
      cmd_verify(cfg, opts, out);
    } else if (command == "rabi") {
      cmd_rabi(cfg, opts, out);
    } else if (command == "simulate") {
      cmd_simulate(cfg, opts, out);
    } else if (command == "gates") {
      cmd_gates(cfg, opts, out);
    } else {
      throw ConfigError("unknown command '" + command + "'");
    }
  } catch (const ConfigError& e) {
    out.status = kConfigError;
    out.report["error"] = e.what();
  } catch (const std::domain_error& e) {
    out.status = kConfigError;
    out.report["error"] = e.what();
  } catch (const std::invalid_argument& e) {
    out.status = kConfigError;
    out.report["error"] = e.what();
  } catch (const std::out_of_range& e) {
    out.status = kConfigError;
    out.report["error"] = e.what();
  } catch (const rwa::IntegrationError& e) {
    out.status = kCheckFailed;
    out.report["error"] = e.what();
    out.report["achieved_error"] = e.achieved();
  } catch (const std::exception& e) {
    out.status = kCheckFailed;
    out.report["error"] = e.what();
  }
  out.report["exit_code"] = out.status;
  return out;
}

CommandOutput run_sweep(const std::string& command, const RunConfig& cfg, const RunOptions& opts) {
  if (!cfg.is_sweep()) return run_command(command, cfg, opts);
  const std::vector<RunConfig> points = cfg.expand();
  std::vector<std::future<CommandOutput>> jobs;
  jobs.reserve(points.size());
  for (const RunConfig& pt : points) {
    jobs.push_back(std::async(std::launch::async, [&command, pt, opts] { return run_command(command, pt, opts); }));
  }

  CommandOutput merged;
  merged.report["command"] = command;
  merged.report["config"] = to_json(cfg);
  ordered_json runs = ordered_json::array();
  bool any_error = false;
  bool any_fail = false;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    CommandOutput r = jobs[i].get();
    char dir[32];
    std::snprintf(dir, sizeof dir, "point_%03zu", i);
    ordered_json entry;
    entry["point"] = i;
    entry["omega"] = points[i].model.omega;
    entry["g"] = points[i].model.g;
    entry["delta_abs"] = points[i].model.delta_abs;
    entry["exit_code"] = r.status;
    entry["report"] = r.report;
    runs.push_back(entry);
    for (auto& [name, content] : r.files) merged.files.emplace_back(std::string(dir) + "/" + name, std::move(content));
    any_error = any_error || r.status == kConfigError;
    any_fail = any_fail || r.status == kCheckFailed;
  }
  merged.status = any_error ? kConfigError : any_fail ? kCheckFailed : kPass;
  merged.report["sweep"] = runs;
  merged.report["pass"] = merged.status == kPass;
  merged.report["exit_code"] = merged.status;
  return merged;
}

void write_outputs(const CommandOutput& out, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& content) {
    const fs::path path = fs::path(dir) / name;
    fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << content;
  };
  write("report.json", out.report.dump(2) + "\n");
  for (const auto& [name, content] : out.files) write(name, content);
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Strong-coupling n-level Rabi model toolkit"};
  app.set_help_all_flag("--help-all");
  std::string command;
  std::string config_path;
  std::string out_dir = ".";
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  bool svg = false;
  app.add_option("command", command, "matelem | verify | rabi | simulate | gates")
      ->required()
      ->check(CLI::IsMember(command_names()));
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out_dir, "output directory (default: current directory)");
  app.add_option("--tol", tol, "override the command's tolerances");
  app.add_option("--seed", seed, "synthesis seed (overrides the config)");
  app.add_flag("--svg", svg, "also write plot.svg (simulate)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigError;
  }

  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "qudit-rabi: " << e.what() << '\n';
    return kConfigError;
  }
  if (seed) cfg.seed = *seed;
  if (tol && !(*tol >= 0.0)) {
    std::cerr << "qudit-rabi: --tol must be >= 0\n";
    return kConfigError;
  }

  RunOptions opts;
  opts.tol = tol;
  opts.svg = svg;
  const CommandOutput out = run_sweep(command, cfg, opts);
  try {
    write_outputs(out, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "qudit-rabi: " << e.what() << '\n';
    return kConfigError;
  }

  if (out.report.contains("error")) std::cerr << "qudit-rabi: " << out.report["error"].get<std::string>() << '\n';
  if (out.report.contains("checks")) {
    for (const auto& c : out.report["checks"]) {
      std::cout << (c["pass"].get<bool>() ? "  ok    " : "  FAIL  ") << c["name"].get<std::string>() << "  "
                << format_double(c["deviation"].is_null() ? std::nan("") : c["deviation"].get<double>()) << " <= "
                << format_double(c["tolerance"].get<double>()) << '\n';
    }
  }
  static const char* kWords[] = {"pass", "check failed", "config error"};
  std::cout << command << ": " << kWords[out.status] << " (exit " << out.status << ")\n";
  return out.status;
}

}  // namespace qrabi::cli
