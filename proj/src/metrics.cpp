#include "thermogeo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "thermogeo/errors.hpp"

namespace thermogeo {

MetricTensor::MetricTensor(RealMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw DimensionError("MetricTensor: entries must be square");
  }
}

double MetricTensor::quadratic_form(const RealVector& v) const {
  if (v.size() != entries_.rows()) {
    throw DimensionError("MetricTensor: velocity dimension mismatch");
  }
  return v.dot(entries_ * v);
}

double MetricTensor::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(symmetrized(entries_),
                                                   Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

bool MetricTensor::is_psd(double tol) const {
  return min_eigenvalue() >= -tol * std::max(max_abs(entries_), 1e-300);
}

ForceSet conjugate_forces(const QuadraticModel& model, const ParamPoint& point) {
  ForceSet set;
  set.forces.reserve(point.size());
  set.forces.push_back(model.coefficients(point.lambda) / point.beta);
  for (int j = 1; j <= model.parameter_count(); ++j) {
    set.forces.push_back(model.derivative(point.lambda, j));
  }
  return set;
}

ComplexMatrix underline_X(const ThermalGaussianState& state, const RealMatrix& force) {
  if (force.rows() != state.dimension() || force.cols() != state.dimension()) {
    throw DimensionError("underline_X: force and state dimensions differ");
  }
  const ComplexMatrix c = two_point(state);
  // (σ − iΩ/2) = Cᵀ, (σ + iΩ/2) = C
  return c.transpose() * force.cast<Complex>() * c;
}

namespace {

ComplexMatrix bar_closed_form(const ThermalGaussianState& state,
                              const RealMatrix& force) {
  const int n = state.dimension();
  const int modes = n / 2;
  const RealMatrix& s = state.normal_modes.symplectic;
  const RealVector& nu = state.normal_modes.frequencies;
  const RealMatrix omega = symplectic_form(modes);

  // ΩG = S (ΩD) S⁻¹ with ΩD block-diagonal; its eigenvectors (1, ±i)/√2 per mode.
  ComplexMatrix u = ComplexMatrix::Zero(n, n);
  RealVector rate(n);  // e^{ixμ_a} = e^{-x rate_a}
  const double r = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < modes; ++k) {
    u(2 * k, 2 * k) = r;
    u(2 * k + 1, 2 * k) = Complex(0.0, r);
    u(2 * k, 2 * k + 1) = r;
    u(2 * k + 1, 2 * k + 1) = Complex(0.0, -r);
    rate(2 * k) = nu(k);
    rate(2 * k + 1) = -nu(k);
  }
  const ComplexMatrix v = s.cast<Complex>() * u;
  const RealMatrix s_inv = -omega * s.transpose() * omega;
  const ComplexMatrix v_inv = u.adjoint() * s_inv.cast<Complex>();

  const ComplexMatrix b = v.transpose() * force.cast<Complex>() * v;
  ComplexMatrix k_mat(n, n);
  const double beta = state.beta;
  for (int a = 0; a < n; ++a) {
    for (int c = 0; c < n; ++c) {
      const double exponent = -(rate(a) + rate(c));
      const double scale = std::abs(exponent * beta) < 1e-14
                               ? beta
                               : std::expm1(exponent * beta) / exponent;
      k_mat(a, c) = b(a, c) * scale;
    }
  }
  return v_inv.transpose() * k_mat * v_inv;
}

ComplexMatrix bar_quadrature_fixed(const ThermalGaussianState& state,
                                   const RealMatrix& force, const QuadratureRule& rule,
                                   int panels) {
  const int n = state.dimension();
  const RealMatrix omega = symplectic_form(n / 2);
  const ComplexMatrix xf = force.cast<Complex>();
  const double h = state.beta / panels;
  ComplexMatrix total = ComplexMatrix::Zero(n, n);
  for (int p = 0; p < panels; ++p) {
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double x = (p + rule.nodes[q]) * h;
      const ComplexMatrix prop = imaginary_time_propagator(state.g, omega, x);
      total += (rule.weights[q] * h) * (prop.transpose() * xf * prop);
    }
  }
  return total;
}

}  // namespace

ComplexMatrix bar_X(const ThermalGaussianState& state, const RealMatrix& force,
                    BarMethod method, int panels) {
  if (force.rows() != state.dimension() || force.cols() != state.dimension()) {
    throw DimensionError("bar_X: force and state dimensions differ");
  }
  if (state.regime == Regime::classical) {
    // Commuting phase-space variables: the imaginary-time flow is trivial.
    return state.beta * force.cast<Complex>();
  }
  if (method == BarMethod::closed_form) return bar_closed_form(state, force);

  if (panels < 1) throw ArgumentError("bar_X: panels must be >= 1");
  static const QuadratureRule rule = QuadratureRule::gauss_legendre(5);
  ComplexMatrix previous = bar_quadrature_fixed(state, force, rule, panels);
  double delta = std::numeric_limits<double>::infinity();
  for (int level = 0; level < 10; ++level) {
    panels *= 2;
    ComplexMatrix current = bar_quadrature_fixed(state, force, rule, panels);
    const double scale = std::max(max_abs(current), 1e-300);
    delta = max_abs(current - previous) / scale;
    if (delta < 1e-9 || max_abs(current) == 0.0) return current;
    previous = std::move(current);
  }
  throw ConvergenceError("bar_X: x-quadrature did not converge", delta);
}

namespace {

RealMatrix assemble_m(const ForceSet& forces,
                      const std::vector<ComplexMatrix>& underline) {
  const int n = static_cast<int>(forces.size());
  RealMatrix m = RealMatrix::Zero(n, n);
  for (int j = 1; j < n; ++j) {
    for (int k = 1; k < n; ++k) {
      m(j, k) = 0.5 * (forces[j].cast<Complex>() * underline[k]).trace().real();
    }
  }
  return symmetrized(m);
}

// (β/2) tr(bar𝕏ⱼ underline𝕏ₖ) evaluated in the normal-mode eigenbasis of ΩG.
// With V = S·U, B = VᵀXV and occupations D (n̄+1 on the decaying, n̄ on the
// growing eigenvector) the trace is Σ_ab W_ab Bʲ_ab conj(Bᵏ_ab) where
// W_ab = D_a D_b ∫₀^β e^{−(r_a+r_b)x} dx. The exponentials are combined with
// the occupations so that no factor exceeds one.
ComplexMatrix spectral_g(const ThermalGaussianState& state, const ForceSet& forces) {
  const int dim = state.dimension();
  const int modes = dim / 2;
  const double beta = state.beta;
  const RealMatrix& s = state.normal_modes.symplectic;
  const RealVector& nu = state.normal_modes.frequencies;
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  RealVector rate(dim);
  RealVector q(dim);
  const double r = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < modes; ++k) {
    u(2 * k, 2 * k) = r;
    u(2 * k + 1, 2 * k) = Complex(0.0, r);
    u(2 * k, 2 * k + 1) = r;
    u(2 * k + 1, 2 * k + 1) = Complex(0.0, -r);
    rate(2 * k) = nu(k);
    rate(2 * k + 1) = -nu(k);
    q(2 * k) = q(2 * k + 1) = -1.0 / std::expm1(-beta * nu(k));
  }
  RealMatrix w(dim, dim);
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) {
      const double total = rate(a) + rate(b);
      const double mu = std::min(rate(a), 0.0) + std::min(rate(b), 0.0);
      const double hi = beta * std::max(mu, mu - total);
      const double y = std::abs(total) * beta;
      const double integral = y < 1e-300 ? beta : -std::expm1(-y) / std::abs(total);
      w(a, b) = q(a) * q(b) * std::exp(hi) * integral;
    }
  }
  const ComplexMatrix v = s.cast<Complex>() * u;
  std::vector<ComplexMatrix> b;
  for (const RealMatrix& x : forces.forces) {
    b.push_back(v.transpose() * x.cast<Complex>() * v);
  }
  const int n = static_cast<int>(forces.size());
  ComplexMatrix out(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      out(j, k) = 0.5 * beta *
                  (w.cast<Complex>().cwiseProduct(b[j]).cwiseProduct(b[k].conjugate())).sum();
    }
  }
  return out;
}

RealMatrix assemble_g(const ThermalGaussianState& state, const ForceSet& forces,
                      const std::vector<ComplexMatrix>& underline, BarMethod method,
                      MetricDiagnostics* diagnostics) {
  const int n = static_cast<int>(forces.size());
  ComplexMatrix raw(n, n);
  if (state.regime == Regime::quantum && method == BarMethod::closed_form) {
    raw = spectral_g(state, forces);
  } else {
    std::vector<ComplexMatrix> bar;
    bar.reserve(n);
    for (int j = 0; j < n; ++j) bar.push_back(bar_X(state, forces[j], method));
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        raw(j, k) = 0.5 * state.beta * (bar[j] * underline[k]).trace();
      }
    }
  }
  const RealMatrix re = raw.real();
  const double scale = std::max(max_abs(re), 1e-300);
  MetricDiagnostics local;
  local.imaginary_ratio = max_abs(raw.imag()) / scale;
  local.g_asymmetry = max_abs(re - re.transpose()) / scale;
  if (diagnostics) *diagnostics = local;
  if (local.imaginary_ratio > 1e-8) {
    std::ostringstream os;
    os << "metric_g: imaginary residue ratio " << local.imaginary_ratio;
    throw ConsistencyError(os.str());
  }
  if (local.g_asymmetry > 1e-8) {
    std::ostringstream os;
    os << "metric_g: asymmetry " << local.g_asymmetry << " exceeds 1e-8";
    throw ConsistencyError(os.str());
  }
  return symmetrized(re);
}

}  // namespace

MetricTensor metric_m(const QuadraticModel& model, const ParamPoint& point,
                      const MetricOptions& options) {
  const ThermalGaussianState state = thermal_covariance(model, point, options.regime);
  const ForceSet forces = conjugate_forces(model, point);
  std::vector<ComplexMatrix> underline;
  for (const auto& f : forces.forces) underline.push_back(underline_X(state, f));
  return MetricTensor(assemble_m(forces, underline));
}

MetricTensor metric_g(const QuadraticModel& model, const ParamPoint& point,
                      const MetricOptions& options, MetricDiagnostics* diagnostics) {
  const ThermalGaussianState state = thermal_covariance(model, point, options.regime);
  const ForceSet forces = conjugate_forces(model, point);
  std::vector<ComplexMatrix> underline;
  for (const auto& f : forces.forces) underline.push_back(underline_X(state, f));
  return MetricTensor(
      assemble_g(state, forces, underline, options.bar_method, diagnostics));
}

MetricPair metrics_at(const QuadraticModel& model, const ParamPoint& point,
                      const MetricOptions& options) {
  const ThermalGaussianState state = thermal_covariance(model, point, options.regime);
  const ForceSet forces = conjugate_forces(model, point);
  std::vector<ComplexMatrix> underline;
  for (const auto& f : forces.forces) underline.push_back(underline_X(state, f));
  MetricPair out;
  out.m = MetricTensor(assemble_m(forces, underline));
  out.g = MetricTensor(
      assemble_g(state, forces, underline, options.bar_method, &out.diagnostics));
  return out;
}

MetricTensor metric_classical_fisher(const QuadraticModel& model,
                                     const ParamPoint& point,
                                     TemperatureCoordinate coordinate) {
  if (!(point.beta > 0.0)) {
    throw ArgumentError("metric_classical_fisher: inverse temperature must be positive");
  }
  const RealMatrix g = model.coefficients(point.lambda);
  Eigen::LDLT<RealMatrix> ldlt(g);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 0.0) {
    throw PositivityError("metric_classical_fisher: classical covariance is singular");
  }
  const int n = g.rows();
  const RealMatrix g_inv = ldlt.solve(RealMatrix::Identity(n, n));
  const double temperature = 1.0 / point.beta;
  const RealMatrix sigma = temperature * g_inv;
  const RealMatrix sigma_inv = point.beta * g;

  const int d = model.parameter_count();
  std::vector<RealMatrix> dsigma;
  dsigma.push_back(coordinate == TemperatureCoordinate::temperature
                       ? g_inv
                       : RealMatrix(-temperature * temperature * g_inv));
  for (int j = 1; j <= d; ++j) {
    dsigma.push_back(-temperature * g_inv * model.derivative(point.lambda, j) * g_inv);
  }
  RealMatrix f(d + 1, d + 1);
  for (int j = 0; j <= d; ++j) {
    for (int k = 0; k <= d; ++k) {
      f(j, k) = 0.5 * (sigma_inv * dsigma[k] * sigma_inv * dsigma[j]).trace();
    }
  }
  (void)sigma;
  return MetricTensor(symmetrized(f));
}

void require_work_extracting(double adiabatic_work) {
  if (!(adiabatic_work < 0.0)) {
    std::ostringstream os;
    os << "not a work-extracting cycle: adiabatic work " << adiabatic_work
       << " must be negative";
    throw CycleDirectionError(os.str());
  }
}

MetricTensor combined_metric(const MetricTensor& m, const MetricTensor& g,
                             double epsilon, double beta_cold, double adiabatic_work) {
  require_work_extracting(adiabatic_work);
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw ArgumentError("combined_metric: epsilon must lie in [0, 1]");
  }
  if (m.size() != g.size()) throw DimensionError("combined_metric: size mismatch");
  const double fluct = epsilon * beta_cold * beta_cold;
  const double eff = (1.0 - epsilon) / (2.0 * beta_cold * std::abs(adiabatic_work));
  return MetricTensor(fluct * m.entries() + eff * g.entries());
}

MetricTensor combined_metric(const QuadraticModel& model, const ParamPoint& point,
                             double epsilon, double beta_cold, double adiabatic_work,
                             const MetricOptions& options) {
  const MetricPair pair = metrics_at(model, point, options);
  return combined_metric(pair.m, pair.g, epsilon, beta_cold, adiabatic_work);
}

MetricTensor combined_metric_classical(const MetricTensor& fisher, double temperature,
                                       double epsilon, double beta_cold,
                                       double adiabatic_work) {
  require_work_extracting(adiabatic_work);
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw ArgumentError("combined_metric_classical: epsilon must lie in [0, 1]");
  }
  const int n = fisher.size();
  const double ratio = temperature * beta_cold;  // T / T_c
  const double eff = (1.0 - epsilon) / (2.0 * beta_cold * std::abs(adiabatic_work));
  RealMatrix out(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const double mu = (j > 0 && k > 0) ? 1.0 : 0.0;
      out(j, k) = (epsilon * ratio * ratio * mu + eff) * fisher(j, k);
    }
  }
  return MetricTensor(out);
}

double adiabatic_work(const QuadraticModel& model, const ControlCurve& curve, int panels,
                      Regime regime) {
  curve.require_closed();
  static const QuadratureRule rule = QuadratureRule::gauss_legendre(5);
  const int d = model.parameter_count();
  return integrate_1d(
      [&](double t) {
        const ParamPoint p = curve(t);
        const RealVector v = curve.velocity(t);
        const ThermalGaussianState st = thermal_covariance(model, p, regime);
        double rate = 0.0;
        for (int j = 1; j <= d; ++j) {
          if (v(j) == 0.0) continue;
          rate += 0.5 * model.derivative(p.lambda, j).cwiseProduct(st.sigma).sum() * v(j);
        }
        return rate;
      },
      0.0, 1.0, rule, panels);
}

}  // namespace thermogeo
