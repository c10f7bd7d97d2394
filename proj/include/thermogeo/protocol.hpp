#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "thermogeo/curve.hpp"
#include "thermogeo/gaussian.hpp"
#include "thermogeo/metrics.hpp"

namespace thermogeo {

/// Fluctuation and efficiency tensors at a control point.
using MetricFn = std::function<MetricPair(const ParamPoint&)>;

/// Gaussian pipeline in the requested regime.
MetricFn gaussian_metrics(QuadraticModel model, MetricOptions options = {});
/// Classical phase-space Gaussian through its Fisher-Rao tensor F in β
/// coordinates: m = T²F on the mechanical block, g = F.
MetricFn classical_metrics(QuadraticModel model);

/// Prefactors of M^ε = ε·fluctuation·m + (1−ε)·efficiency·g.
struct ObjectiveWeights {
  double fluctuation = 1.0;
  double efficiency = 1.0;
};

/// Step-cycle prefactors: β_c² and 1/(2β_c|𝒲|). Requires 𝒲 < 0.
ObjectiveWeights step_cycle_weights(double beta_cold, double adiabatic_work);

/// A closed curve together with its metrics and objective prefactors.
struct Geometry {
  ControlCurve curve;
  MetricFn metrics;
  ObjectiveWeights weights;
};

/// √(M^ε_jk Λ̇ʲ Λ̇ᵏ) at curve parameter t. Throws PositivityError when the
/// quadratic form is below −1e-12 (relative to the size of its terms).
double speed_integrand(const Geometry& geometry, double epsilon, double t);

/// Both quadratic forms Λ̇ᵀmΛ̇ and Λ̇ᵀgΛ̇ sampled on a fixed composite
/// Gauss-Legendre grid in the curve parameter, shared by every ε.
class CurveSampling {
 public:
  CurveSampling(const Geometry& geometry, int panels = 64, int order = 8);

  int panels() const { return panels_; }
  int order() const { return order_; }
  const ObjectiveWeights& weights() const { return weights_; }
  /// Node u_i and quadrature weight of node i.
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& node_weights() const { return node_weights_; }
  const std::vector<double>& fluctuation_form() const { return fluct_; }
  const std::vector<double>& efficiency_form() const { return eff_; }
  /// Largest relative asymmetry of g met while sampling.
  double max_g_asymmetry() const { return max_asymmetry_; }

  /// Q^ε at the nodes.
  std::vector<double> combined_form(double epsilon) const;

 private:
  int panels_;
  int order_;
  ObjectiveWeights weights_;
  std::vector<double> nodes_;
  std::vector<double> node_weights_;
  std::vector<double> fluct_;
  std::vector<double> eff_;
  double max_asymmetry_ = 0.0;
};

class ArcLength;
struct Integrals;
struct ObjectiveReport;
struct ObjectiveOptions;

/// Monotone reparameterization φ: [0,1] → [0,1] with its derivative, also kept
/// on a uniform grid for output.
class Schedule {
 public:
  using Map = std::function<double(double)>;

  /// φ(t) = t.
  static Schedule identity(int grid = 1001);
  /// Arbitrary monotone schedule given with its derivative. Checks φ(0) = 0,
  /// φ(1) = 1 and monotonicity on the grid.
  static Schedule from_functions(Map phi, Map phi_dot, int grid = 1001,
                                 double epsilon = -1.0, double length = 0.0);

  double epsilon() const { return epsilon_; }  // −1 when not an optimum
  double length() const { return length_; }    // L_ε, 0 when not an optimum
  double phi(double t) const;
  double phi_dot(double t) const;

  const std::vector<double>& grid_t() const { return t_; }
  const std::vector<double>& grid_phi() const { return phi_grid_; }
  const std::vector<double>& grid_phi_dot() const { return phi_dot_grid_; }
  /// φ evaluated from the stored grid by monotone cubic interpolation.
  double interpolated_phi(double t) const { return interpolant_(t); }

  /// Applies the schedule to a curve: t ↦ Λ(φ(t)).
  ControlCurve apply(const ControlCurve& curve) const;

 private:
  friend Schedule optimal_schedule(const CurveSampling&, double, int);
  friend ObjectiveReport scaled_objective_value(const Geometry&, const Schedule&, double,
                                                double, const ObjectiveOptions&);

  Integrals integrate_in_arc(const Geometry& geometry, int order) const;

  Map phi_;
  Map phi_dot_;
  double epsilon_ = -1.0;
  double length_ = 0.0;
  std::vector<double> t_;
  std::vector<double> phi_grid_;
  std::vector<double> phi_dot_grid_;
  MonotoneCubic interpolant_;
  std::shared_ptr<const ArcLength> arc_;
};

/// L_ε = ∫₀¹ √Q^ε du; Q^ε is interpolated panelwise from the sampled nodes and
/// its square root integrated adaptively so that zero-speed points are resolved.
double thermodynamic_length(const CurveSampling& sampling, double epsilon);
double thermodynamic_length(const Geometry& geometry, double epsilon, int panels = 64);

/// Solves t = (1/L_ε)∫₀^{φ(t)} √Q^ε du for φ; φ̇ = L_ε / √Q^ε(φ). Throws
/// DegenerateCycleError when L_ε = 0.
Schedule optimal_schedule(const CurveSampling& sampling, double epsilon,
                          int grid = 1001);

/// Random smooth monotone schedule
/// φ(t) = t + Σ a_k (sin(2πkt + θ_k) − sin θ_k)/(2πk) with Σ|a_k| ≤ 0.9.
Schedule random_schedule(std::uint64_t seed, int harmonics = 4, int grid = 1001);

struct ObjectiveReport {
  double variance = 0.0;     // Var(W̃)
  double deficit = 0.0;      // δη
  double objective = 0.0;    // ε Var(W̃) + (1−ε) δη
  double epsilon = 0.0;
  int steps = 0;
  bool slow_driving = true;
  double slow_driving_ratio = 0.0;
};

struct ObjectiveOptions {
  int panels = 64;
  int order = 8;
  bool enforce_slow_driving = false;
};

/// Var(W̃) = (w_fluct/N)∫ m(Λ∘φ)[d(Λ∘φ)/dt]² dt and δη likewise with g, using
/// fresh metric evaluations along the reparameterized curve. Optimal schedules
/// are integrated in u = φ(t), where the integrand stays bounded at zero-speed
/// points; a term that diverges there (speed zero, form not) is +inf. Throws
/// ConvergenceError when `enforce_slow_driving` is set and the check fails.
ObjectiveReport objective_value(const Geometry& geometry, const Schedule& schedule,
                                int steps, double epsilon,
                                const ObjectiveOptions& options = {});

/// Same assembly with the 1/N prefactor replaced by 1/divisor and no slow-driving
/// bookkeeping; used by continuous-time conventions.
ObjectiveReport scaled_objective_value(const Geometry& geometry, const Schedule& schedule,
                                       double divisor, double epsilon,
                                       const ObjectiveOptions& options = {});

struct SlowDrivingReport {
  bool pass = true;
  double max_ratio = 0.0;  // max over the grid of (|φ̇|/N)²
};

/// Flags pass when max (|φ̇|/N)² < 0.01.
SlowDrivingReport slow_driving_check(const Schedule& schedule, int steps);

/// Coefficient of variation of √Q^ε(φ(t))·φ̇(t) over the schedule grid, with
/// Q^ε evaluated afresh along the curve.
double constant_speed_variation(const Geometry& geometry, const Schedule& schedule);

struct ParetoPoint {
  double epsilon = 0.0;
  double deficit = 0.0;    // δη
  double fluctuation = 0.0;  // ΔW̃ = √Var(W̃)
  double length = 0.0;     // L_ε
  double objective = 0.0;
  double slow_driving_ratio = 0.0;
};

/// Optimal schedule and its objective for each ε, in ε order. Runs on up to
/// `threads` workers; results do not depend on the thread count.
std::vector<ParetoPoint> pareto_sweep(const Geometry& geometry,
                                      const CurveSampling& sampling,
                                      const std::vector<double>& epsilons, int steps,
                                      int threads = 1,
                                      const ObjectiveOptions& options = {});

/// ε-grid of `count` uniform points on [0, 1].
std::vector<double> uniform_epsilon_grid(int count = 51);

}  // namespace thermogeo
