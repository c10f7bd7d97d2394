#pragma once

#include <vector>

#include "thermogeo/curve.hpp"
#include "thermogeo/gaussian.hpp"
#include "thermogeo/protocol.hpp"

namespace thermogeo {

/// Temperatures bounding the cycle; δβ(t) = (β(t) − β_c)/(β_h − β_c).
struct Reservoirs {
  double beta_cold = 1.0;
  double beta_hot = 0.5;

  double carnot() const { return 1.0 - beta_hot / beta_cold; }
};

/// Per-step and total bookkeeping of an N-point quench/equilibrate cycle.
struct CycleLedger {
  int steps = 0;
  std::vector<double> work_increments;
  std::vector<double> heat_increments;
  std::vector<double> variance_increments;
  std::vector<double> relative_entropies;

  double work = 0.0;
  double heat_in = 0.0;
  double variance = 0.0;
  double entropy_production = 0.0;  // Σ S(π_n‖π_{n+1})
  double identity_value = 0.0;      // β_c W + (β_c − β_h) Q_in
  bool engine = false;              // W < 0 and Q_in > 0
  double efficiency = 0.0;          // −W/Q_in, only meaningful when engine
  double deficit = 0.0;             // 1 − η/η_C, only meaningful when engine

  /// |identity_value − entropy_production| / max(1, |β_c W|).
  double identity_residual(double beta_cold) const;
};

/// Samples t_n = (n−1)/(N−1). Work increment ½tr(ΔG σ_n), variance increment
/// ½Re tr(ΔG C ΔG Cᵀ), heat increment δβ(t_{n+1})·½tr(G_{n+1}(σ_{n+1} − σ_n)).
/// Throws TopologyError for an open curve, ArgumentError for N < 2 or
/// δβ outside [0, 1].
CycleLedger run_cycle(const QuadraticModel& model, const ControlCurve& curve, int steps,
                      const Reservoirs& reservoirs, Regime regime = Regime::quantum);

struct ConvergenceRow {
  int steps = 0;
  double scaled_variance = 0.0;  // N β_c² Var(W)
  double scaled_deficit = 0.0;   // 2N β_c |𝒲| δη
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  double variance_limit = 0.0;  // ∫ β_c² m(Λ̇, Λ̇) dt
  double deficit_limit = 0.0;   // ∫ g(Λ̇, Λ̇) dt
  double adiabatic_work = 0.0;
  double variance_exponent = 0.0;  // fitted p in |x_N − limit| ∝ N^{−p}
  double deficit_exponent = 0.0;
};

/// Runs the cycle on the scheduled curve for every N and compares with the
/// geometric limits computed from `metrics` along the same curve.
ConvergenceTable convergence_study(const QuadraticModel& model, const ControlCurve& curve,
                                   const Schedule& schedule, const std::vector<int>& steps,
                                   const Reservoirs& reservoirs, const MetricFn& metrics,
                                   Regime regime = Regime::quantum);

/// Least-squares slope p of log|x_N − limit| against −log N.
double fit_convergence_exponent(const std::vector<int>& steps,
                                const std::vector<double>& values, double limit);

}  // namespace thermogeo
