#pragma once

#include <vector>

#include "thermogeo/curve.hpp"
#include "thermogeo/gaussian.hpp"
#include "thermogeo/numerics.hpp"
#include "thermogeo/param_point.hpp"

namespace thermogeo {

/// Symmetric PSD tensor over Λ-coordinates, index 0 = β.
class MetricTensor {
 public:
  MetricTensor() = default;
  explicit MetricTensor(RealMatrix entries);

  const RealMatrix& entries() const { return entries_; }
  double operator()(int j, int k) const { return entries_(j, k); }
  int size() const { return static_cast<int>(entries_.rows()); }

  /// v^j M_jk v^k
  double quadratic_form(const RealVector& v) const;
  double min_eigenvalue() const;
  /// min eigenvalue >= -tol * max|M|
  bool is_psd(double tol = 1e-9) const;

 private:
  RealMatrix entries_;
};

/// Conjugate-force matrices: 𝕏₀ = β⁻¹G, 𝕏ⱼ = ∂G/∂λʲ.
struct ForceSet {
  std::vector<RealMatrix> forces;

  std::size_t size() const { return forces.size(); }
  const RealMatrix& operator[](std::size_t j) const { return forces[j]; }
};

ForceSet conjugate_forces(const QuadraticModel& model, const ParamPoint& point);

/// (σ − iΩ/2) 𝕏 (σ + iΩ/2); classical states drop the Ω terms.
ComplexMatrix underline_X(const ThermalGaussianState& state, const RealMatrix& force);

enum class BarMethod { closed_form, quadrature };

/// ∫₀^β [e^{ixΩG}]ᵀ 𝕏 [e^{ixΩG}] dx.
/// Quadrature: composite 5-node Gauss-Legendre starting from `panels`, doubled
/// until the relative change is below 1e-9. Closed form: integrate the
/// exponentials of the normal-mode eigenbasis analytically.
ComplexMatrix bar_X(const ThermalGaussianState& state, const RealMatrix& force,
                    BarMethod method = BarMethod::closed_form, int panels = 4);

struct MetricOptions {
  Regime regime = Regime::quantum;
  BarMethod bar_method = BarMethod::closed_form;
};

/// Diagnostics recorded while assembling the efficiency metric.
struct MetricDiagnostics {
  double g_asymmetry = 0.0;      // max|g̃ - g̃ᵀ| / max|g̃|
  double imaginary_ratio = 0.0;  // max|Im| / max|Re| of the traces
};

struct MetricPair {
  MetricTensor m;
  MetricTensor g;
  MetricDiagnostics diagnostics;
};

/// Fluctuation metric: ½·Re tr(𝕏ⱼ underline𝕏ₖ) symmetrized, β row/column zero.
MetricTensor metric_m(const QuadraticModel& model, const ParamPoint& point,
                      const MetricOptions& options = {});
/// Kubo-Mori efficiency metric: (β/2)·Re tr(bar𝕏ⱼ underline𝕏ₖ), symmetrized.
MetricTensor metric_g(const QuadraticModel& model, const ParamPoint& point,
                      const MetricOptions& options = {},
                      MetricDiagnostics* diagnostics = nullptr);
/// Both metrics from one thermal state.
MetricPair metrics_at(const QuadraticModel& model, const ParamPoint& point,
                      const MetricOptions& options = {});

enum class TemperatureCoordinate { temperature, inverse_temperature };

/// Fisher-Rao metric ½ tr(σ⁻¹∂ⱼσ σ⁻¹∂ₖσ) of the classical phase-space Gaussian
/// σ_cl = T·G⁻¹. Index 0 is T or β according to `coordinate`.
MetricTensor metric_classical_fisher(
    const QuadraticModel& model, const ParamPoint& point,
    TemperatureCoordinate coordinate = TemperatureCoordinate::inverse_temperature);

/// M^ε = ε β_c² m + (1−ε)/(2β_c|𝒲|) g. Requires 𝒲 < 0.
MetricTensor combined_metric(const MetricTensor& m, const MetricTensor& g,
                             double epsilon, double beta_cold, double adiabatic_work);
MetricTensor combined_metric(const QuadraticModel& model, const ParamPoint& point,
                             double epsilon, double beta_cold, double adiabatic_work,
                             const MetricOptions& options = {});
/// Classical form (ε (T/T_c)² μ + (1−ε)/(2β_c|𝒲|)) F with μ masking the
/// temperature row and column.
MetricTensor combined_metric_classical(const MetricTensor& fisher, double temperature,
                                       double epsilon, double beta_cold,
                                       double adiabatic_work);

/// 𝒲 = ½∮ tr(𝕏ⱼ σ) dλʲ by composite Gauss-Legendre in t.
double adiabatic_work(const QuadraticModel& model, const ControlCurve& curve,
                      int panels = 200, Regime regime = Regime::quantum);

/// Throws CycleDirectionError unless 𝒲 < 0.
void require_work_extracting(double adiabatic_work);

}  // namespace thermogeo
