#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "thermogeo/models.hpp"

namespace thermogeo::cli {

/// Bad or inconsistent configuration; `key` is the dotted path of the culprit.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class Pipeline { quantum_gaussian, classical, lindblad, fock_validate };

std::string to_string(Pipeline p);

enum class ProtocolKind { harmonic, constant };

struct RunConfig {
  Pipeline pipeline = Pipeline::quantum_gaussian;
  Preset preset = fig1_preset();
  ProtocolKind protocol = ProtocolKind::harmonic;
  std::vector<double> epsilons{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<int> steps{50};
  std::vector<double> cold_sweep;  // pareto: one output per T_c
  int samples = 101;  // metric: points along the curve
  int grid = 1001;    // optimize: schedule resolution
  double gamma = 0.1;
  double duration = 1.0;
  int cutoff = 120;
  std::vector<double> fock_omegas{0.5, 1.0, 2.0, 5.0};
  std::vector<double> fock_betas{0.5, 1.0, 2.0, 5.0};
  std::string output;
};

/// Parses JSON text. Unknown keys, wrong types and out-of-range values throw
/// ConfigError naming the key. `preset` seeds the defaults before the text is
/// applied; the text may name its own preset.
RunConfig parse_config(const std::string& text, const std::string& preset = "");
RunConfig load_config(const std::string& path, const std::string& preset = "");
RunConfig default_config(const std::string& preset = "");

}  // namespace thermogeo::cli
