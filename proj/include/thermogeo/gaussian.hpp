#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "thermogeo/numerics.hpp"
#include "thermogeo/param_point.hpp"

namespace thermogeo {

/// Quantum states carry the commutator term iΩ/2 in their two-point function;
/// classical phase-space Gaussians do not.
enum class Regime { quantum, classical };

/// D-mode quadratic Hamiltonian H = ½ Rᵀ G(λ) R with R = (x1, p1, ..., xD, pD).
class QuadraticModel {
 public:
  using CoefficientFn = std::function<RealMatrix(std::span<const double>)>;
  /// Derivative with respect to lambda^j, j in [1, d].
  using DerivativeFn = std::function<RealMatrix(std::span<const double>, int)>;

  QuadraticModel(int modes, std::vector<std::string> parameter_names,
                 CoefficientFn coefficients, DerivativeFn derivative);

  int modes() const { return modes_; }
  int dimension() const { return 2 * modes_; }
  int parameter_count() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& parameter_names() const { return names_; }

  RealMatrix coefficients(std::span<const double> lambda) const;
  RealMatrix derivative(std::span<const double> lambda, int j) const;

 private:
  void check_lambda(std::span<const double> lambda) const;

  int modes_;
  std::vector<std::string> names_;
  CoefficientFn g_;
  DerivativeFn dg_;
};

/// Block-diagonal ⊕ [[0,1],[-1,0]].
RealMatrix symplectic_form(int modes);

struct Williamson {
  RealMatrix symplectic;  // S with Sᵀ G S = ⊕ ν_k I₂ and Sᵀ Ω S = Ω
  RealVector frequencies;  // ν_k, descending
};

Williamson williamson(const RealMatrix& g);

struct ThermalGaussianState {
  Regime regime = Regime::quantum;
  double beta = 1.0;
  RealMatrix g;
  RealMatrix sigma;
  double log_partition = 0.0;
  Williamson normal_modes;

  int dimension() const { return static_cast<int>(g.rows()); }
};

ThermalGaussianState thermal_state(const RealMatrix& g, double beta,
                                   Regime regime = Regime::quantum);
ThermalGaussianState thermal_covariance(const QuadraticModel& model,
                                        const ParamPoint& point,
                                        Regime regime = Regime::quantum);

/// ⟨R Rᵀ⟩ = σ + iΩ/2 (quantum) or σ (classical).
ComplexMatrix two_point(const ThermalGaussianState& state);

/// Smallest eigenvalue of σ + iΩ/2 (quantum) or σ (classical).
double physicality_margin(const ThermalGaussianState& state);

/// ½ tr(G σ).
double mean_energy(const ThermalGaussianState& state);

/// Cov(½RᵀAR, ½RᵀBR) in the state, real part: ½ Re tr(A C B Cᵀ).
double quadratic_covariance(const ThermalGaussianState& state, const RealMatrix& a,
                            const RealMatrix& b);

/// S(π₁‖π₂) for thermal Gaussians of equal dimension and regime.
double relative_entropy(const ThermalGaussianState& first,
                        const ThermalGaussianState& second);

/// e^{ixΩG}; the Heisenberg flow e^{-xH} R e^{xH} = P(x) R.
ComplexMatrix imaginary_time_propagator(const RealMatrix& g, const RealMatrix& omega,
                                        double x);

}  // namespace thermogeo
