#include "qrabi/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace qrabi::cli {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

double get_number(const json& v, const std::string& name) {
  if (!v.is_number()) throw ConfigError(name + " must be a number");
  return v.get<double>();
}

int get_int(const json& v, const std::string& name) {
  if (!v.is_number_integer()) throw ConfigError(name + " must be an integer");
  return v.get<int>();
}

bool get_bool(const json& v, const std::string& name) {
  if (!v.is_boolean()) throw ConfigError(name + " must be true or false");
  return v.get<bool>();
}

std::string get_choice(const json& v, const std::string& name, const std::set<std::string>& choices) {
  if (!v.is_string()) throw ConfigError(name + " must be a string");
  std::string s = v.get<std::string>();
  if (!choices.count(s)) throw ConfigError("invalid value '" + s + "' for " + name);
  return s;
}

// scalar or list; a list fills `sweep` and returns its first entry
double scalar_or_list(const json& v, const std::string& name, std::vector<double>& sweep) {
  if (v.is_array()) {
    if (v.empty()) throw ConfigError(name + " list must not be empty");
    sweep.clear();
    for (const json& e : v) sweep.push_back(get_number(e, name));
    return sweep.front();
  }
  return get_number(v, name);
}

cplx get_complex(const json& v, const std::string& name) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2) return {get_number(v[0], name), get_number(v[1], name)};
  if (v.is_object()) {
    reject_unknown(v, {"re", "im"}, name);
    return {v.contains("re") ? get_number(v["re"], name) : 0.0, v.contains("im") ? get_number(v["im"], name) : 0.0};
  }
  throw ConfigError(name + " must be a number, [re, im] or {\"re\", \"im\"}");
}

void parse_algebra(const json& a, model::ModelConfig& m) {
  if (!a.is_object()) throw ConfigError("algebra must be an object");
  reject_unknown(a, {"kind", "K", "twoJ"}, "algebra");
  if (!a.contains("kind")) throw ConfigError("algebra.kind is required");
  const std::string kind = get_choice(a["kind"], "algebra.kind", {"oscillator", "su11", "su2"});
  if (kind == "oscillator") {
    m.algebra = AlgebraSpec::oscillator();
  } else if (kind == "su11") {
    if (!a.contains("K")) throw ConfigError("algebra.K is required for su11");
    const double K = get_number(a["K"], "algebra.K");
    if (!(K > 0.0)) throw ConfigError("algebra.K must be > 0");
    m.algebra = AlgebraSpec::su11(K);
  } else {
    if (!a.contains("twoJ")) throw ConfigError("algebra.twoJ is required for su2");
    const int twoJ = get_int(a["twoJ"], "algebra.twoJ");
    if (twoJ < 1) throw ConfigError("algebra.twoJ must be >= 1");
    m.algebra = AlgebraSpec::su2(twoJ);
  }
}

void parse_time(const json& t, TimeGrid& g) {
  if (!t.is_object()) throw ConfigError("command.time must be an object");
  reject_unknown(t, {"start", "stop", "periods", "steps"}, "command.time");
  if (t.contains("start")) g.start = get_number(t["start"], "time.start");
  if (t.contains("stop") && !t["stop"].is_null()) g.stop = get_number(t["stop"], "time.stop");
  if (t.contains("periods")) g.periods = get_number(t["periods"], "time.periods");
  if (t.contains("steps")) g.steps = get_int(t["steps"], "time.steps");
  if (g.steps < 1) throw ConfigError("time.steps must be >= 1");
  if (!(g.periods > 0.0)) throw ConfigError("time.periods must be > 0");
  if (g.stop && !(*g.stop > g.start)) throw ConfigError("time.stop must exceed time.start");
}

template <typename T, typename F>
std::vector<T> get_list(const json& v, const std::string& name, F item) {
  if (!v.is_array()) throw ConfigError(name + " must be a list");
  std::vector<T> out;
  for (const json& e : v) out.push_back(item(e, name));
  return out;
}

void parse_command(const json& c, CommandParams& p) {
  if (!c.is_object()) throw ConfigError("command must be an object");
  reject_unknown(c,
                 {"z", "max_index", "oracle_dim", "check_levels", "m", "r", "j", "j_prime", "solve_resonance",
                  "levels", "time", "integrator", "mode", "integrator_tol", "frequency_tol", "durations", "target",
                  "planted", "max_depth", "beam_width", "convention", "min_fidelity", "tol"},
                 "command");
  if (c.contains("z")) {
    // a list holds one entry per z; each entry is a number, [re, im] or {"re", "im"}
    p.z_values = c["z"].is_array() ? get_list<cplx>(c["z"], "command.z", get_complex)
                                   : std::vector<cplx>{get_complex(c["z"], "command.z")};
    if (p.z_values.empty()) throw ConfigError("command.z must not be empty");
  }
  if (c.contains("max_index")) p.max_index = get_int(c["max_index"], "command.max_index");
  if (c.contains("oracle_dim")) p.oracle_dim = get_int(c["oracle_dim"], "command.oracle_dim");
  if (c.contains("check_levels")) p.check_levels = get_int(c["check_levels"], "command.check_levels");
  if (c.contains("m")) p.m = get_int(c["m"], "command.m");
  if (c.contains("r")) p.r = get_int(c["r"], "command.r");
  if (c.contains("j")) p.j = get_int(c["j"], "command.j");
  if (c.contains("j_prime") && !c["j_prime"].is_null()) p.j_prime = get_int(c["j_prime"], "command.j_prime");
  if (c.contains("solve_resonance")) p.solve_resonance = get_bool(c["solve_resonance"], "command.solve_resonance");
  if (c.contains("levels")) p.levels = get_list<int>(c["levels"], "command.levels", get_int);
  if (c.contains("time")) parse_time(c["time"], p.time);
  if (c.contains("integrator")) p.integrator = get_choice(c["integrator"], "command.integrator", {"reduced", "full", "both"});
  if (c.contains("mode")) p.mode = get_choice(c["mode"], "command.mode", {"rwa_only", "full_terms"});
  if (c.contains("integrator_tol")) p.integrator_tol = get_number(c["integrator_tol"], "command.integrator_tol");
  if (c.contains("frequency_tol")) p.frequency_tol = get_number(c["frequency_tol"], "command.frequency_tol");
  if (c.contains("durations")) p.durations = get_list<double>(c["durations"], "command.durations", get_number);
  if (c.contains("target")) p.target = get_choice(c["target"], "command.target", {"planted", "controlled_shift"});
  if (c.contains("planted")) p.planted = get_list<int>(c["planted"], "command.planted", get_int);
  if (c.contains("max_depth")) p.max_depth = get_int(c["max_depth"], "command.max_depth");
  if (c.contains("beam_width")) p.beam_width = get_int(c["beam_width"], "command.beam_width");
  if (c.contains("convention")) {
    p.convention = get_choice(c["convention"], "command.convention", {"control_second", "control_first"});
  }
  if (c.contains("min_fidelity")) p.min_fidelity = get_number(c["min_fidelity"], "command.min_fidelity");
  if (c.contains("tol") && !c["tol"].is_null()) p.tol = get_number(c["tol"], "command.tol");

  if (p.max_index < 0) throw ConfigError("command.max_index must be >= 0");
  if (p.oracle_dim < 0) throw ConfigError("command.oracle_dim must be >= 0");
  if (p.m < 0 || p.r < 0) throw ConfigError("command.m and command.r must be >= 0");
  if (!(p.integrator_tol > 0.0)) throw ConfigError("command.integrator_tol must be > 0");
  if (p.max_depth < 0 || p.beam_width < 1) throw ConfigError("command.max_depth >= 0 and beam_width >= 1 required");
  if (p.tol && !(*p.tol >= 0.0)) throw ConfigError("command.tol must be >= 0");
}

}  // namespace

std::vector<RunConfig> RunConfig::expand() const {
  const std::vector<double> omegas = omega_sweep.empty() ? std::vector<double>{model.omega} : omega_sweep;
  const std::vector<double> gs = g_sweep.empty() ? std::vector<double>{model.g} : g_sweep;
  const std::vector<double> deltas = delta_abs_sweep.empty() ? std::vector<double>{model.delta_abs} : delta_abs_sweep;
  std::vector<RunConfig> out;
  for (double w : omegas) {
    for (double g : gs) {
      for (double d : deltas) {
        RunConfig c = *this;
        c.omega_sweep.clear();
        c.g_sweep.clear();
        c.delta_abs_sweep.clear();
        c.model.omega = w;
        c.model.g = g;
        c.model.delta_abs = d;
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(doc, {"n", "algebra", "omega", "g", "delta", "trunc_dim", "command", "seed"}, "config");
  RunConfig cfg;
  model::ModelConfig& m = cfg.model;
  if (doc.contains("n")) m.n = get_int(doc["n"], "n");
  if (doc.contains("algebra")) parse_algebra(doc["algebra"], m);
  if (doc.contains("omega")) m.omega = scalar_or_list(doc["omega"], "omega", cfg.omega_sweep);
  if (doc.contains("g")) m.g = scalar_or_list(doc["g"], "g", cfg.g_sweep);
  if (doc.contains("delta")) {
    const json& d = doc["delta"];
    if (!d.is_object()) throw ConfigError("delta must be {\"abs\": ..., \"phase\": ...}");
    reject_unknown(d, {"abs", "phase"}, "delta");
    if (d.contains("abs")) m.delta_abs = scalar_or_list(d["abs"], "delta.abs", cfg.delta_abs_sweep);
    if (d.contains("phase")) m.delta_phase = get_number(d["phase"], "delta.phase");
  }
  if (doc.contains("trunc_dim")) m.trunc_dim = get_int(doc["trunc_dim"], "trunc_dim");
  if (doc.contains("command")) parse_command(doc["command"], cfg.command);
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  for (const RunConfig& point : cfg.expand()) {
    try {
      point.model.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    return parse_config(doc);
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

ordered_json to_json(const RunConfig& cfg) {
  const model::ModelConfig& m = cfg.model;
  auto scalar_or_list = [](double v, const std::vector<double>& sweep) {
    return sweep.empty() ? ordered_json(v) : ordered_json(sweep);
  };
  ordered_json out;
  out["n"] = m.n;
  ordered_json alg;
  alg["kind"] = m.algebra.name();
  if (m.algebra.kind == AlgebraSpec::Kind::SU11) alg["K"] = m.algebra.bargmann_K;
  if (m.algebra.kind == AlgebraSpec::Kind::SU2) alg["twoJ"] = m.algebra.spin_2J;
  out["algebra"] = alg;
  out["omega"] = scalar_or_list(m.omega, cfg.omega_sweep);
  out["g"] = scalar_or_list(m.g, cfg.g_sweep);
  out["delta"] = {{"abs", scalar_or_list(m.delta_abs, cfg.delta_abs_sweep)}, {"phase", m.delta_phase}};
  out["trunc_dim"] = m.trunc_dim;

  const CommandParams& p = cfg.command;
  ordered_json c;
  ordered_json zs = ordered_json::array();
  for (cplx z : p.z_values) zs.push_back({z.real(), z.imag()});
  c["z"] = zs;
  c["max_index"] = p.max_index;
  c["oracle_dim"] = p.oracle_dim;
  c["check_levels"] = p.check_levels;
  c["m"] = p.m;
  c["r"] = p.r;
  c["j"] = p.j;
  if (p.j_prime) c["j_prime"] = *p.j_prime;
  c["solve_resonance"] = p.solve_resonance;
  c["levels"] = p.levels;
  ordered_json t;
  t["start"] = p.time.start;
  if (p.time.stop) t["stop"] = *p.time.stop;
  t["periods"] = p.time.periods;
  t["steps"] = p.time.steps;
  c["time"] = t;
  c["integrator"] = p.integrator;
  c["mode"] = p.mode;
  c["integrator_tol"] = p.integrator_tol;
  c["frequency_tol"] = p.frequency_tol;
  c["durations"] = p.durations;
  c["target"] = p.target;
  c["planted"] = p.planted;
  c["max_depth"] = p.max_depth;
  c["beam_width"] = p.beam_width;
  c["convention"] = p.convention;
  c["min_fidelity"] = p.min_fidelity;
  if (p.tol) c["tol"] = *p.tol;
  out["command"] = c;
  out["seed"] = cfg.seed;
  return out;
}

}  // namespace qrabi::cli
