#pragma once

#include <span>
#include <vector>

#include "thermogeo/gaussian.hpp"
#include "thermogeo/metrics.hpp"
#include "thermogeo/param_point.hpp"

namespace thermogeo {

/// Brute-force operator representation of a one- or two-mode quadratic model
/// in a truncated number basis. Deliberately simple and slow.
///
/// Quadratures use a per-mode reference frequency w: x = (a + a†)/√(2w),
/// p = i√(w/2)(a† − a). Products RₐR_b are formed in a basis two levels larger
/// and then cut, so every retained matrix element of a quadratic form is exact.
class FockModel {
 public:
  FockModel(QuadraticModel model, int cutoff);

  int cutoff() const { return cutoff_; }
  int modes() const { return model_.modes(); }
  int dimension() const;
  const QuadraticModel& model() const { return model_; }

  /// √(G_xx/G_pp) per mode at λ, which diagonalizes uncoupled oscillators.
  std::vector<double> natural_reference(std::span<const double> lambda) const;

  /// ½ RᵀAR in the truncated basis.
  ComplexMatrix quadratic(const RealMatrix& a, std::span<const double> reference) const;
  /// Single quadrature R_i embedded in the full truncated space.
  ComplexMatrix quadrature(int index, std::span<const double> reference) const;

 private:
  QuadraticModel model_;
  int cutoff_;
};

struct FockState {
  double beta = 1.0;
  std::vector<double> reference;
  ComplexMatrix density;
  RealVector energies;        // ascending
  ComplexMatrix eigenvectors;  // columns
  RealVector populations;     // Boltzmann weights of the eigenstates
  double log_partition = 0.0;
  double tail_mass = 0.0;     // population on the top retained level of any mode
};

/// e^{−βH}/Tr e^{−βH} in the truncated space. Throws TruncationError (with a
/// suggested cutoff) when the tail mass reaches `tail_tolerance`.
FockState thermal_density(const FockModel& fock, const ParamPoint& point,
                          double tail_tolerance = 1e-10);

/// ½Tr(π{δXⱼ, δXₖ}) over mechanical indices; the β row and column are zero.
MetricTensor metric_m_fock(const FockModel& fock, const ParamPoint& point);

/// β Σ_{m,n} p_m (δXⱼ)_{mn} (δXₖ)_{nm} w(E_m − E_n), w(Δ) = (e^{βΔ} − 1)/Δ,
/// including the β direction X₀ = H/β.
MetricTensor metric_g_fock(const FockModel& fock, const ParamPoint& point);

/// Tr(ΔH²π) − Tr(ΔHπ)² for the quench λ_n → λ_{n+1} from π(Λ_n).
double var_work_step(const FockModel& fock, const ParamPoint& from, const ParamPoint& to);

struct TruncationReport {
  int cutoff = 0;
  int doubled_cutoff = 0;
  double drift = 0.0;  // max relative change of ⟨H⟩, lnZ, m and g entries
  bool pass = false;   // drift < 1e-8
};

/// Recomputes key scalars at the cutoff and twice the cutoff.
TruncationReport truncation_check(const FockModel& fock, const ParamPoint& point);

}  // namespace thermogeo
