#pragma once

#include <functional>

#include "thermogeo/gaussian.hpp"
#include "thermogeo/metrics.hpp"
#include "thermogeo/protocol.hpp"

namespace thermogeo {

/// Gaussian Lindbladian with jump operators L_k = c_kᵀR. Rows of the jump
/// matrix are the c_kᵀ.
class LindbladModel {
 public:
  using JumpFn = std::function<ComplexMatrix(const ParamPoint&)>;

  LindbladModel(QuadraticModel model, JumpFn jumps);

  const QuadraticModel& model() const { return model_; }
  ComplexMatrix jumps(const ParamPoint& point) const;

 private:
  QuadraticModel model_;
  JumpFn jumps_;
};

/// Heisenberg drift and diffusion: d⟨R⟩/dt = A⟨R⟩, dσ/dt = Aσ + σAᵀ + D with
/// K = Σ_k c_k c_k†, A = Ω(G − Im K), D = Ω Re K Ωᵀ.
struct DriftDiffusion {
  RealMatrix drift;
  RealMatrix diffusion;
  double max_real_part = 0.0;  // spectral abscissa of A
};

/// Throws StabilityError when A is not Hurwitz with margin
/// 1e-9·max(1, max|A|).
DriftDiffusion drift_diffusion(const LindbladModel& model, const ParamPoint& point);

/// σ_ss with Aσ + σAᵀ + D = 0.
RealMatrix steady_covariance(const LindbladModel& model, const ParamPoint& point,
                             LyapunovReport* report = nullptr);

/// max|σ_ss − σ_thermal|.
double detailed_balance_gap(const LindbladModel& model, const ParamPoint& point);

/// Y = ∫₀^∞ e^{νAᵀ} 𝕏 e^{νA} dν (AᵀY + YA = −𝕏), then (σ − iΩ/2) Y (σ + iΩ/2).
ComplexMatrix dissipative_integral(const LindbladModel& model, const ParamPoint& point,
                                   const RealMatrix& force,
                                   LyapunovReport* report = nullptr);

struct OpenMetricReport {
  MetricPair metrics;
  double max_lyapunov_residual = 0.0;
  double detailed_balance_gap = 0.0;
};

/// m̃ = ½Re tr(𝕏ⱼ underline𝕏ₖ) with zero β row, g̃ = (β/2)tr(bar𝕏ⱼ underline𝕏ₖ),
/// both symmetrized. Throws ConsistencyError when the thermal fixed point gap
/// exceeds 1e-8 or either tensor is not PSD within 1e-9 of its norm.
OpenMetricReport open_metrics(const LindbladModel& model, const ParamPoint& point);

/// Thermal damping of every normal mode at rate γ: L₁ = √(γ(n̄+1)) b_k,
/// L₂ = √(γn̄) b_k† with n̄ = 1/(e^{βν_k} − 1).
LindbladModel thermal_damping(QuadraticModel model, double gamma);

/// Single oscillator (parameter ω) with thermal damping; checks the
/// detailed-balance gate at β = 1, ω = 1 and throws ConsistencyError on failure.
LindbladModel damped_ho_lindblad(double gamma);

/// Continuous-time conventions of the open cycle of duration τ. These differ
/// from the step-cycle prefactors and are kept separate on purpose.
namespace open_cycle {

/// Var(W̃) prefactor 2β_c², δη prefactor η_C/(β_c|𝒲|); divide by τ.
ObjectiveWeights weights(double beta_cold, double beta_hot, double adiabatic_work);

MetricFn metrics(LindbladModel model);

/// Objective of a schedule for total duration τ.
ObjectiveReport objective_value(const Geometry& geometry, const Schedule& schedule,
                                double duration, double epsilon,
                                const ObjectiveOptions& options = {});

}  // namespace open_cycle

}  // namespace thermogeo
