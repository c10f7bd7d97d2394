#include "thermogeo/discrete.hpp"

#include <cmath>
#include <sstream>

#include "thermogeo/errors.hpp"
#include "thermogeo/metrics.hpp"

namespace thermogeo {

double CycleLedger::identity_residual(double beta_cold) const {
  return std::abs(identity_value - entropy_production) /
         std::max(1.0, std::abs(beta_cold * work));
}

CycleLedger run_cycle(const QuadraticModel& model, const ControlCurve& curve, int steps,
                      const Reservoirs& reservoirs, Regime regime) {
  if (steps < 2) throw ArgumentError("run_cycle: need N >= 2");
  if (!(reservoirs.beta_hot > 0.0) || !(reservoirs.beta_hot < reservoirs.beta_cold)) {
    throw ArgumentError("run_cycle: need 0 < beta_h < beta_c");
  }
  curve.require_closed();

  std::vector<ThermalGaussianState> states;
  std::vector<double> delta_beta;
  states.reserve(steps);
  for (int n = 0; n < steps; ++n) {
    const double t = static_cast<double>(n) / (steps - 1);
    const ParamPoint p = curve(n == steps - 1 ? 1.0 : t);
    const double db =
        (p.beta - reservoirs.beta_cold) / (reservoirs.beta_hot - reservoirs.beta_cold);
    if (db < -1e-12 || db > 1.0 + 1e-12) {
      std::ostringstream os;
      os << "run_cycle: delta beta = " << db << " outside [0, 1] at t = " << t;
      throw ArgumentError(os.str());
    }
    delta_beta.push_back(db);
    states.push_back(thermal_covariance(model, p, regime));
  }

  CycleLedger ledger;
  ledger.steps = steps;
  for (int n = 0; n + 1 < steps; ++n) {
    const ThermalGaussianState& a = states[n];
    const ThermalGaussianState& b = states[n + 1];
    const RealMatrix dg = b.g - a.g;
    const double dw = 0.5 * dg.cwiseProduct(a.sigma).sum();
    const double dq =
        delta_beta[n + 1] * 0.5 * b.g.cwiseProduct(b.sigma - a.sigma).sum();
    const double dv = quadratic_covariance(a, dg, dg);
    const double s = relative_entropy(a, b);
    ledger.work_increments.push_back(dw);
    ledger.heat_increments.push_back(dq);
    ledger.variance_increments.push_back(dv);
    ledger.relative_entropies.push_back(s);
    ledger.work += dw;
    ledger.heat_in += dq;
    ledger.variance += dv;
    ledger.entropy_production += s;
  }
  const double bc = reservoirs.beta_cold;
  ledger.identity_value =
      bc * ledger.work + (bc - reservoirs.beta_hot) * ledger.heat_in;
  ledger.engine = ledger.work < 0.0 && ledger.heat_in > 0.0;
  if (ledger.engine) {
    ledger.efficiency = -ledger.work / ledger.heat_in;
    ledger.deficit = 1.0 - ledger.efficiency / reservoirs.carnot();
  }
  return ledger;
}

double fit_convergence_exponent(const std::vector<int>& steps,
                                const std::vector<double>& values, double limit) {
  if (steps.size() != values.size() || steps.size() < 2) {
    throw ArgumentError("fit_convergence_exponent: need two or more matching samples");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const double gap = std::abs(values[i] - limit);
    if (!(gap > 0.0)) throw NumericError("fit_convergence_exponent: zero remainder", steps[i]);
    const double x = -std::log(static_cast<double>(steps[i]));
    const double y = std::log(gap);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceTable convergence_study(const QuadraticModel& model, const ControlCurve& curve,
                                   const Schedule& schedule, const std::vector<int>& steps,
                                   const Reservoirs& reservoirs, const MetricFn& metrics,
                                   Regime regime) {
  for (std::size_t i = 1; i < steps.size(); ++i) {
    if (steps[i] <= steps[i - 1]) {
      throw ArgumentError("convergence_study: N list must be increasing");
    }
  }
  const ControlCurve scheduled = schedule.apply(curve);
  ConvergenceTable table;
  table.adiabatic_work = adiabatic_work(model, curve, 200, regime);
  const double bc = reservoirs.beta_cold;

  const QuadratureRule rule = QuadratureRule::gauss_legendre(8);
  const int panels = 64;
  double fluct = 0.0;
  double eff = 0.0;
  for (int p = 0; p < panels; ++p) {
    for (std::size_t j = 0; j < rule.size(); ++j) {
      const double t = (p + rule.nodes[j]) / panels;
      const double w = rule.weights[j] / panels;
      const RealVector v = scheduled.velocity(t);
      const MetricPair pair = metrics(scheduled(t));
      fluct += w * pair.m.quadratic_form(v);
      eff += w * pair.g.quadratic_form(v);
    }
  }
  table.variance_limit = bc * bc * fluct;
  table.deficit_limit = eff;

  std::vector<double> var_values;
  std::vector<double> def_values;
  for (int n : steps) {
    const CycleLedger ledger = run_cycle(model, scheduled, n, reservoirs, regime);
    ConvergenceRow row;
    row.steps = n;
    row.scaled_variance = n * bc * bc * ledger.variance;
    row.scaled_deficit = 2.0 * n * bc * std::abs(table.adiabatic_work) * ledger.deficit;
    table.rows.push_back(row);
    var_values.push_back(row.scaled_variance);
    def_values.push_back(row.scaled_deficit);
  }
  if (steps.size() >= 2) {
    table.variance_exponent =
        fit_convergence_exponent(steps, var_values, table.variance_limit);
    table.deficit_exponent = fit_convergence_exponent(steps, def_values, table.deficit_limit);
  }
  return table;
}

}  // namespace thermogeo
