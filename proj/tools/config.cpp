#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "thermogeo/errors.hpp"
#include "thermogeo/protocol.hpp"

namespace thermogeo::cli {

using nlohmann::json;

std::string to_string(Pipeline p) {
  switch (p) {
    case Pipeline::quantum_gaussian: return "quantum-gaussian";
    case Pipeline::classical: return "classical";
    case Pipeline::lindblad: return "lindblad";
    case Pipeline::fock_validate: return "fock-validate";
  }
  return "?";
}

namespace {

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) {
      throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
    }
  }
}

double get_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

int get_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
  return v.get<int>();
}

std::vector<double> get_numbers(const json& v, const std::string& key) {
  if (!v.is_array() || v.empty()) throw ConfigError(key, "expected a nonempty array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(get_number(v[i], key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Pipeline parse_pipeline(const json& v) {
  if (!v.is_string()) throw ConfigError("pipeline", "expected a string");
  const std::string s = v.get<std::string>();
  if (s == "quantum-gaussian") return Pipeline::quantum_gaussian;
  if (s == "classical") return Pipeline::classical;
  if (s == "lindblad") return Pipeline::lindblad;
  if (s == "fock-validate") return Pipeline::fock_validate;
  throw ConfigError("pipeline", "unknown pipeline '" + s +
                                    "' (quantum-gaussian, classical, lindblad, fock-validate)");
}

Preset lookup_preset(const std::string& name, const std::string& key) {
  try {
    return preset_by_name(name);
  } catch (const ArgumentError& e) {
    throw ConfigError(key, e.what());
  }
}

void apply_model(const json& m, RunConfig& cfg) {
  check_keys(m, "model", {"name", "omega0", "kappa0"});
  if (m.contains("name")) {
    if (!m["name"].is_string()) throw ConfigError("model.name", "expected a string");
    const std::string name = m["name"].get<std::string>();
    if (name != "coupled" && name != "single" && name != "classical") {
      throw ConfigError("model.name", "unknown model '" + name +
                                          "' (coupled, single, classical)");
    }
    cfg.preset.model = name;
  }
  if (m.contains("omega0")) cfg.preset.omega0 = get_number(m["omega0"], "model.omega0");
  if (m.contains("kappa0")) cfg.preset.kappa0 = get_number(m["kappa0"], "model.kappa0");
}

void apply_protocol(const json& p, RunConfig& cfg) {
  check_keys(p, "protocol", {"name", "temperature_cold", "temperature_hot"});
  if (p.contains("name")) {
    if (!p["name"].is_string()) throw ConfigError("protocol.name", "expected a string");
    const std::string name = p["name"].get<std::string>();
    if (name == "harmonic") {
      cfg.protocol = ProtocolKind::harmonic;
    } else if (name == "constant") {
      cfg.protocol = ProtocolKind::constant;
    } else {
      throw ConfigError("protocol.name", "unknown protocol '" + name +
                                             "' (harmonic, constant)");
    }
  }
  if (p.contains("temperature_cold")) {
    cfg.preset.temperature_cold =
        get_number(p["temperature_cold"], "protocol.temperature_cold");
  }
  if (p.contains("temperature_hot")) {
    cfg.preset.temperature_hot = get_number(p["temperature_hot"], "protocol.temperature_hot");
  }
}

void validate(RunConfig& cfg) {
  const Preset& p = cfg.preset;
  if (!(p.omega0 > 0.0)) throw ConfigError("model.omega0", "must be positive");
  if (p.model == "coupled" && !(p.omega0 * p.omega0 + 2.0 * p.kappa0 > 0.0)) {
    throw ConfigError("model.kappa0", "need omega0^2 + 2 kappa0 > 0");
  }
  if (!(p.temperature_cold > 0.0)) {
    throw ConfigError("protocol.temperature_cold", "must be positive");
  }
  if (!(p.temperature_hot > p.temperature_cold)) {
    throw ConfigError("protocol.temperature_hot", "must exceed temperature_cold");
  }
  if (p.model == "classical" && cfg.pipeline == Pipeline::quantum_gaussian) {
    cfg.pipeline = Pipeline::classical;
  }
  if (cfg.pipeline == Pipeline::classical && p.model != "classical") {
    throw ConfigError("pipeline", "classical pipeline needs model.name = classical");
  }
  for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
    if (!(cfg.epsilons[i] >= 0.0 && cfg.epsilons[i] <= 1.0)) {
      throw ConfigError("epsilon[" + std::to_string(i) + "]", "must lie in [0, 1]");
    }
  }
  for (std::size_t i = 0; i < cfg.steps.size(); ++i) {
    if (cfg.steps[i] < 2) {
      throw ConfigError("steps[" + std::to_string(i) + "]", "must be at least 2");
    }
  }
  for (std::size_t i = 0; i < cfg.cold_sweep.size(); ++i) {
    if (!(cfg.cold_sweep[i] > 0.0)) {
      throw ConfigError("temperature_cold_sweep[" + std::to_string(i) + "]",
                        "must be positive");
    }
  }
  if (cfg.samples < 2) throw ConfigError("samples", "must be at least 2");
  if (cfg.grid < 1001) throw ConfigError("grid", "must be at least 1001");
  if (!(cfg.gamma > 0.0)) throw ConfigError("lindblad.gamma", "must be positive");
  if (!(cfg.duration > 0.0)) throw ConfigError("lindblad.duration", "must be positive");
  if (cfg.cutoff < 2) throw ConfigError("fock.cutoff", "must be at least 2");
  for (double w : cfg.fock_omegas) {
    if (!(w > 0.0)) throw ConfigError("fock.omega", "entries must be positive");
  }
  for (double b : cfg.fock_betas) {
    if (!(b > 0.0)) throw ConfigError("fock.beta", "entries must be positive");
  }
}

}  // namespace

RunConfig default_config(const std::string& preset) {
  RunConfig cfg;
  if (!preset.empty()) cfg.preset = lookup_preset(preset, "--preset");
  cfg.steps = {cfg.preset.steps};
  validate(cfg);
  return cfg;
}

RunConfig parse_config(const std::string& text, const std::string& preset) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed config: ") + e.what());
  }
  check_keys(root, "",
             {"preset", "pipeline", "model", "protocol", "epsilon", "epsilon_count", "steps",
              "temperature_cold_sweep", "samples", "grid", "lindblad", "fock", "output"});

  RunConfig cfg;
  std::string name = preset;
  if (root.contains("preset")) {
    if (!root["preset"].is_string()) throw ConfigError("preset", "expected a string");
    if (name.empty()) name = root["preset"].get<std::string>();
  }
  if (!name.empty()) cfg.preset = lookup_preset(name, "preset");
  cfg.steps = {cfg.preset.steps};

  if (root.contains("pipeline")) cfg.pipeline = parse_pipeline(root["pipeline"]);
  if (root.contains("model")) apply_model(root["model"], cfg);
  if (root.contains("protocol")) apply_protocol(root["protocol"], cfg);
  if (root.contains("epsilon") && root.contains("epsilon_count")) {
    throw ConfigError("epsilon_count", "give either epsilon or epsilon_count");
  }
  if (root.contains("epsilon")) cfg.epsilons = get_numbers(root["epsilon"], "epsilon");
  if (root.contains("epsilon_count")) {
    const int n = get_int(root["epsilon_count"], "epsilon_count");
    if (n < 2) throw ConfigError("epsilon_count", "must be at least 2");
    cfg.epsilons = uniform_epsilon_grid(n);
  }
  if (root.contains("steps")) {
    const json& s = root["steps"];
    cfg.steps.clear();
    if (s.is_array()) {
      if (s.empty()) throw ConfigError("steps", "expected a nonempty array");
      for (std::size_t i = 0; i < s.size(); ++i) {
        cfg.steps.push_back(get_int(s[i], "steps[" + std::to_string(i) + "]"));
      }
    } else {
      cfg.steps.push_back(get_int(s, "steps"));
    }
  }
  if (root.contains("temperature_cold_sweep")) {
    cfg.cold_sweep = get_numbers(root["temperature_cold_sweep"], "temperature_cold_sweep");
  }
  if (root.contains("samples")) cfg.samples = get_int(root["samples"], "samples");
  if (root.contains("grid")) cfg.grid = get_int(root["grid"], "grid");
  if (root.contains("lindblad")) {
    const json& l = root["lindblad"];
    check_keys(l, "lindblad", {"gamma", "duration"});
    if (l.contains("gamma")) cfg.gamma = get_number(l["gamma"], "lindblad.gamma");
    if (l.contains("duration")) cfg.duration = get_number(l["duration"], "lindblad.duration");
  }
  if (root.contains("fock")) {
    const json& f = root["fock"];
    check_keys(f, "fock", {"cutoff", "omega", "beta"});
    if (f.contains("cutoff")) cfg.cutoff = get_int(f["cutoff"], "fock.cutoff");
    if (f.contains("omega")) cfg.fock_omegas = get_numbers(f["omega"], "fock.omega");
    if (f.contains("beta")) cfg.fock_betas = get_numbers(f["beta"], "fock.beta");
  }
  if (root.contains("output")) {
    if (!root["output"].is_string()) throw ConfigError("output", "expected a string");
    cfg.output = root["output"].get<std::string>();
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path, const std::string& preset) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str(), preset);
}

}  // namespace thermogeo::cli
