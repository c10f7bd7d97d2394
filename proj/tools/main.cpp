// thermogeo: metrics, thermodynamic lengths, optimal schedules and Pareto
// fronts of quadratic heat-engine cycles.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "thermogeo/errors.hpp"

using namespace thermogeo;
using namespace thermogeo::cli;

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string preset;
  int threads = 1;
};

RunConfig resolve(const Flags& f) {
  RunConfig cfg = f.config.empty() ? default_config(f.preset) : load_config(f.config, f.preset);
  if (!f.out.empty()) cfg.output = f.out;
  return cfg;
}

/// Writes through a file when a path is configured, stdout otherwise.
template <typename Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ostringstream buffer;
  fn(buffer);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("--out", "cannot write '" + path + "'");
  file << buffer.str();
}

int run(const std::string& command, const Flags& flags) {
  const RunConfig cfg = resolve(flags);
  if (command == "metric") {
    emit(cfg.output, [&](std::ostream& o) { cmd_metric(cfg, o); });
  } else if (command == "length") {
    emit(cfg.output, [&](std::ostream& o) { cmd_length(cfg, o); });
  } else if (command == "optimize") {
    emit(cfg.output, [&](std::ostream& o) { cmd_optimize(cfg, o); });
  } else if (command == "oracle") {
    emit(cfg.output, [&](std::ostream& o) { cmd_oracle(cfg, o); });
  } else if (command == "pareto") {
    if (cfg.cold_sweep.empty()) {
      emit(cfg.output, [&](std::ostream& o) { cmd_pareto(cfg, o, flags.threads); });
    } else {
      for (double tc : cfg.cold_sweep) {
        RunConfig cell = cfg;
        const double gap = cfg.preset.temperature_hot - cfg.preset.temperature_cold;
        cell.preset.temperature_cold = tc;
        cell.preset.temperature_hot = tc + gap;
        const std::string path = cfg.output.empty() ? "" : sweep_path(cfg.output, tc);
        emit(path, [&](std::ostream& o) { cmd_pareto(cell, o, flags.threads); });
      }
    }
  } else if (command == "validate") {
    bool pass = true;
    emit(cfg.output, [&](std::ostream& o) { pass = cmd_validate(cfg, o); });
    return pass ? kSuccess : kValidationFailure;
  }
  return kSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermodynamic geometry of quadratic heat-engine cycles"};
  app.require_subcommand(1);
  Flags flags;
  for (const char* name : {"metric", "length", "optimize", "pareto", "oracle", "validate"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", flags.config, "JSON run configuration");
    sub->add_option("--out", flags.out, "output path (stdout when omitted)");
    sub->add_option("--threads", flags.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--preset", flags.preset, "fig1 | fig2 | fig2-coupling | classical");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, flags);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const CycleDirectionError& e) {
    std::cerr << "precondition: " << e.what()
              << " (the cycle must extract work; reverse the protocol or swap reservoirs)\n";
    return kConfigError;
  } catch (const DegenerateCycleError& e) {
    std::cerr << "precondition: " << e.what() << " (the protocol has zero length)\n";
    return kConfigError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationFailure;
  }
}
