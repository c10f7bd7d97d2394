#pragma once

#include <ostream>
#include <string>

#include "config.hpp"

namespace thermogeo::cli {

/// Exit codes shared by every subcommand.
enum ExitCode { kSuccess = 0, kValidationFailure = 1, kConfigError = 2 };

/// Per-sample metric entries along the protocol: t, Λ, m_jk, g_jk.
void cmd_metric(const RunConfig& cfg, std::ostream& out);
/// L_ε for each ε of the grid.
void cmd_length(const RunConfig& cfg, std::ostream& out);
/// Optimal schedules: ε, t, φ, φ̇, (φ̇/N)².
void cmd_optimize(const RunConfig& cfg, std::ostream& out);
/// Pareto front at the configured cold temperature.
void cmd_pareto(const RunConfig& cfg, std::ostream& out, int threads = 1);
/// Discrete quench/equilibrate cycle under the linear and optimal schedules.
void cmd_oracle(const RunConfig& cfg, std::ostream& out);
/// JSON-lines report, one record per check. Returns true iff all pass.
bool cmd_validate(const RunConfig& cfg, std::ostream& out);

/// Output files of a pareto run: one per T_c of the sweep, or `base` alone.
std::string sweep_path(const std::string& base, double temperature_cold);

/// Shortest text that reads back to the same double; "inf"/"nan" otherwise.
std::string format_number(double x);

}  // namespace thermogeo::cli
