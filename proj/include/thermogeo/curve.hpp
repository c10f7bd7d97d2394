#pragma once

#include <functional>

#include "thermogeo/numerics.hpp"
#include "thermogeo/param_point.hpp"

namespace thermogeo {

/// Closed curve t ↦ Λ(t) on [0, 1]. Without an analytic velocity the curve
/// differentiates itself by central differences (step 1e-6) on its periodic
/// extension.
class ControlCurve {
 public:
  using PointFn = std::function<ParamPoint(double)>;
  using VelocityFn = std::function<RealVector(double)>;

  ControlCurve() = default;
  explicit ControlCurve(PointFn point, VelocityFn velocity = {});

  ParamPoint operator()(double t) const;
  RealVector velocity(double t) const;
  std::size_t size() const;
  bool has_analytic_velocity() const { return static_cast<bool>(velocity_); }

  /// max |Λ(0) - Λ(1)|.
  double closure_gap() const;
  /// Throws TopologyError when the closure gap exceeds `tol`.
  void require_closed(double tol = 1e-12) const;

  /// t ↦ Λ(φ(t)) with chain-rule velocity.
  ControlCurve reparameterized(std::function<double(double)> phi,
                               std::function<double(double)> phi_dot) const;
  /// t ↦ Λ((t + offset) mod 1), same closed path started elsewhere.
  ControlCurve shifted(double offset) const;

  static constexpr double kDifferenceStep = 1e-6;

 private:
  PointFn point_;
  VelocityFn velocity_;
};

}  // namespace thermogeo
