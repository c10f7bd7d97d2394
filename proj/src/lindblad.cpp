#include "thermogeo/lindblad.hpp"

#include <cmath>
#include <sstream>

#include "thermogeo/errors.hpp"
#include "thermogeo/models.hpp"

namespace thermogeo {

LindbladModel::LindbladModel(QuadraticModel model, JumpFn jumps)
    : model_(std::move(model)), jumps_(std::move(jumps)) {
  if (!jumps_) throw ArgumentError("LindbladModel: missing jump map");
}

ComplexMatrix LindbladModel::jumps(const ParamPoint& point) const {
  ComplexMatrix c = jumps_(point);
  if (c.cols() != model_.dimension()) {
    throw DimensionError("LindbladModel: jump rows must have 2D entries");
  }
  if (!c.allFinite()) throw NumericError("LindbladModel: non-finite jump coefficient");
  return c;
}

DriftDiffusion drift_diffusion(const LindbladModel& model, const ParamPoint& point) {
  const RealMatrix g = model.model().coefficients(point.lambda);
  const ComplexMatrix c = model.jumps(point);
  const RealMatrix omega = symplectic_form(model.model().modes());
  // K_ab = Σ_k c_ka conj(c_kb)
  const ComplexMatrix k = c.transpose() * c.conjugate();
  DriftDiffusion out;
  out.drift = omega * (g - k.imag());
  out.diffusion = symmetrized(omega * k.real() * omega.transpose());
  const EigenSystem es = eig_general(out.drift);
  out.max_real_part = es.values.real().maxCoeff();
  const double margin = 1e-9 * std::max(1.0, max_abs(out.drift));
  if (!(out.max_real_part < -margin)) {
    std::ostringstream os;
    os << "drift_diffusion: drift is not Hurwitz (spectral abscissa " << out.max_real_part
       << ")";
    throw StabilityError(os.str(), out.max_real_part);
  }
  return out;
}

RealMatrix steady_covariance(const LindbladModel& model, const ParamPoint& point,
                             LyapunovReport* report) {
  const DriftDiffusion dd = drift_diffusion(model, point);
  // Aσ + σAᵀ = −D is the transposed form of the solver's equation.
  return solve_lyapunov(dd.drift.transpose(), dd.diffusion, report);
}

double detailed_balance_gap(const LindbladModel& model, const ParamPoint& point) {
  const RealMatrix ss = steady_covariance(model, point);
  const ThermalGaussianState th = thermal_covariance(model.model(), point);
  return max_abs(ss - th.sigma);
}

namespace {

ComplexMatrix sandwich(const RealMatrix& sigma, const RealMatrix& y) {
  const int modes = static_cast<int>(sigma.rows()) / 2;
  const ComplexMatrix half_omega =
      Complex(0.0, 0.5) * symplectic_form(modes).cast<Complex>();
  const ComplexMatrix s = sigma.cast<Complex>();
  return (s - half_omega) * y.cast<Complex>() * (s + half_omega);
}

}  // namespace

ComplexMatrix dissipative_integral(const LindbladModel& model, const ParamPoint& point,
                                   const RealMatrix& force, LyapunovReport* report) {
  const DriftDiffusion dd = drift_diffusion(model, point);
  const RealMatrix sigma = solve_lyapunov(dd.drift.transpose(), dd.diffusion);
  const RealMatrix y = solve_lyapunov(dd.drift, symmetrized(force), report);
  return sandwich(sigma, y);
}

OpenMetricReport open_metrics(const LindbladModel& model, const ParamPoint& point) {
  OpenMetricReport out;
  const DriftDiffusion dd = drift_diffusion(model, point);
  LyapunovReport lr;
  const RealMatrix sigma = solve_lyapunov(dd.drift.transpose(), dd.diffusion, &lr);
  out.max_lyapunov_residual = lr.residual;

  const ThermalGaussianState state = thermal_covariance(model.model(), point);
  out.detailed_balance_gap = max_abs(sigma - state.sigma);
  if (out.detailed_balance_gap > 1e-8) {
    std::ostringstream os;
    os << "open_metrics: steady state differs from the thermal state by "
       << out.detailed_balance_gap;
    throw ConsistencyError(os.str());
  }

  const ForceSet forces = conjugate_forces(model.model(), point);
  const int n = static_cast<int>(forces.size());
  std::vector<ComplexMatrix> under;
  std::vector<ComplexMatrix> bar;
  for (int j = 0; j < n; ++j) {
    const RealMatrix y = solve_lyapunov(dd.drift, forces[j], &lr);
    out.max_lyapunov_residual = std::max(out.max_lyapunov_residual, lr.residual);
    under.push_back(sandwich(sigma, y));
    bar.push_back(bar_X(state, forces[j]));
  }
  RealMatrix m = RealMatrix::Zero(n, n);
  RealMatrix g(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j > 0 && k > 0) {
        m(j, k) = 0.5 * (forces[j].cast<Complex>() * under[k]).trace().real();
      }
      g(j, k) = 0.5 * point.beta * (bar[j] * under[k]).trace().real();
    }
  }
  out.metrics.m = MetricTensor(symmetrized(m));
  out.metrics.g = MetricTensor(symmetrized(g));
  const double g_scale = std::max(max_abs(g), 1e-300);
  out.metrics.diagnostics.g_asymmetry = max_abs(g - g.transpose()) / g_scale;
  for (const MetricTensor* t : {&out.metrics.m, &out.metrics.g}) {
    if (!t->is_psd(1e-9)) {
      std::ostringstream os;
      os << "open_metrics: tensor not positive semi-definite (min eigenvalue "
         << t->min_eigenvalue() << ")";
      throw ConsistencyError(os.str());
    }
  }
  return out;
}

LindbladModel thermal_damping(QuadraticModel model, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ArgumentError("thermal_damping: rate must be positive");
  }
  const QuadraticModel copy = model;
  return LindbladModel(std::move(model), [copy, gamma](const ParamPoint& p) {
    const Williamson w = williamson(copy.coefficients(p.lambda));
    const int modes = copy.modes();
    const RealMatrix omega = symplectic_form(modes);
    // S⁻ᵀ = (−ΩSᵀΩ)ᵀ = −ΩᵀSΩᵀ
    const RealMatrix s_inv_t = (-omega * w.symplectic.transpose() * omega).transpose();
    ComplexMatrix c(2 * modes, 2 * modes);
    const double r = 1.0 / std::sqrt(2.0);
    for (int k = 0; k < modes; ++k) {
      ComplexVector e = ComplexVector::Zero(2 * modes);
      e(2 * k) = r;
      e(2 * k + 1) = Complex(0.0, r);
      const ComplexVector lower = s_inv_t.cast<Complex>() * e;
      const double occupation = 1.0 / std::expm1(p.beta * w.frequencies(k));
      c.row(2 * k) = std::sqrt(gamma * (occupation + 1.0)) * lower.transpose();
      c.row(2 * k + 1) = std::sqrt(gamma * occupation) * lower.conjugate().transpose();
    }
    return c;
  });
}

LindbladModel damped_ho_lindblad(double gamma) {
  LindbladModel model = thermal_damping(single_ho(), gamma);
  ParamPoint probe{1.0, {1.0}};
  double gap = 0.0;
  try {
    gap = detailed_balance_gap(model, probe);
  } catch (const StabilityError& e) {
    throw ConsistencyError(std::string("damped_ho_lindblad: ") + e.what());
  }
  if (!(gap <= 1e-8)) {
    std::ostringstream os;
    os << "damped_ho_lindblad: steady state misses the thermal state by " << gap;
    throw ConsistencyError(os.str());
  }
  return model;
}

namespace open_cycle {

ObjectiveWeights weights(double beta_cold, double beta_hot, double adiabatic_work) {
  require_work_extracting(adiabatic_work);
  if (!(beta_hot > 0.0) || !(beta_hot < beta_cold)) {
    throw ArgumentError("open_cycle::weights: need 0 < beta_h < beta_c");
  }
  const double carnot = 1.0 - beta_hot / beta_cold;
  return {2.0 * beta_cold * beta_cold, carnot / (beta_cold * std::abs(adiabatic_work))};
}

MetricFn metrics(LindbladModel model) {
  return [model = std::move(model)](const ParamPoint& p) {
    return open_metrics(model, p).metrics;
  };
}

ObjectiveReport objective_value(const Geometry& geometry, const Schedule& schedule,
                                double duration, double epsilon,
                                const ObjectiveOptions& options) {
  if (!(duration > 0.0)) throw ArgumentError("open_cycle: duration must be positive");
  return scaled_objective_value(geometry, schedule, duration, epsilon, options);
}

}  // namespace open_cycle

}  // namespace thermogeo
